// Copyright 2026 The nnmip authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "nnmip/bigm.hpp"

#include <algorithm>
#include <cmath>

#include "nnmip/nn_engine.hpp"

namespace nnmip {

namespace {

enum class UnitKind { kStableOff, kStableOn, kUnstable, kIdentity };

struct UnitPlan {
  UnitKind kind;
  double m1 = 0.0;  // pre-activation lower bound
  double m2 = 0.0;  // pre-activation upper bound
  int var = -1;     // activation value variable
  int binary = -1;  // indicator, unstable units only
};

}  // namespace

NetworkEncoding encode_network(const NnModel& net, const Vector& input_lo,
                               const Vector& input_up) {
  const int p = net.input_dim();
  if (input_lo.size() != p || input_up.size() != p) {
    throw Error("encode_network: box dimension mismatch");
  }
  if (!input_lo.allFinite() || !input_up.allFinite()) {
    throw Error("encode_network: unbounded input box");
  }
  const int depth = static_cast<int>(net.layers.size());
  for (int l = 0; l < depth; ++l) {
    const Activation act = net.layers[l].activation;
    if (l + 1 == depth && act != Activation::kIdentity) {
      throw Error("encode_network: final layer must be identity");
    }
    if (l + 1 < depth && act != Activation::kRelu) {
      throw Error("encode_network: hidden layers must be relu");
    }
  }

  const IntervalBounds bounds = interval_propagate(net, input_lo, input_up);

  // Variable layout: inputs, then per layer all unit values followed by
  // that layer's binaries. Classify units and count everything first.
  std::vector<std::vector<UnitPlan>> plans(depth);
  int num_vars = p;
  long num_binaries = 0;
  long num_rows = 0;
  for (int l = 0; l < depth; ++l) {
    const int width = static_cast<int>(net.layers[l].w.rows());
    plans[l].resize(width);
    for (int i = 0; i < width; ++i) {
      UnitPlan& unit = plans[l][i];
      unit.m1 = bounds.lo[l](i);
      unit.m2 = bounds.up[l](i);
      unit.var = num_vars++;
      if (net.layers[l].activation == Activation::kIdentity) {
        unit.kind = UnitKind::kIdentity;
        num_rows += 2;
      } else if (unit.m2 <= 0.0) {
        unit.kind = UnitKind::kStableOff;  // value pinned at 0, no rows
      } else if (unit.m1 >= 0.0) {
        unit.kind = UnitKind::kStableOn;
        num_rows += 2;
      } else {
        unit.kind = UnitKind::kUnstable;
        num_rows += 4;
        ++num_binaries;
      }
    }
    for (int i = 0; i < width; ++i) {
      if (plans[l][i].kind == UnitKind::kUnstable) {
        plans[l][i].binary = num_vars++;
      }
    }
  }

  NetworkEncoding enc;
  MilpModel& model = enc.model;
  model.q_diag = Vector::Zero(num_vars);
  model.lin = Vector::Zero(num_vars);
  model.lower = Vector::Zero(num_vars);
  model.upper = Vector::Zero(num_vars);
  model.integer.assign(num_vars, false);
  model.a.setZero(num_rows, num_vars);
  model.b.setZero(num_rows);

  model.lower.head(p) = input_lo;
  model.upper.head(p) = input_up;
  enc.input_vars.resize(p);
  for (int j = 0; j < p; ++j) enc.input_vars[j] = j;

  std::vector<int> prev_vars = enc.input_vars;
  long row = 0;
  for (int l = 0; l < depth; ++l) {
    const Layer& layer = net.layers[l];
    const int width = static_cast<int>(layer.w.rows());
    std::vector<int> cur_vars(width);
    for (int i = 0; i < width; ++i) {
      const UnitPlan& unit = plans[l][i];
      cur_vars[i] = unit.var;
      const auto put_pre = [&](long r, double scale) {
        for (size_t j = 0; j < prev_vars.size(); ++j) {
          model.a(r, prev_vars[j]) += scale * layer.w(i, j);
        }
      };
      switch (unit.kind) {
        case UnitKind::kStableOff:
          model.lower(unit.var) = 0.0;
          model.upper(unit.var) = 0.0;
          break;
        case UnitKind::kIdentity:
        case UnitKind::kStableOn: {
          // value = pre-activation, as a pair of inequalities.
          put_pre(row, 1.0);
          model.a(row, unit.var) = -1.0;
          model.b(row) = -layer.b(i);
          ++row;
          put_pre(row, -1.0);
          model.a(row, unit.var) = 1.0;
          model.b(row) = layer.b(i);
          ++row;
          model.lower(unit.var) =
              unit.kind == UnitKind::kStableOn ? std::max(unit.m1, 0.0)
                                               : unit.m1;
          model.upper(unit.var) = unit.m2;
          break;
        }
        case UnitKind::kUnstable: {
          // value >= pre
          put_pre(row, 1.0);
          model.a(row, unit.var) = -1.0;
          model.b(row) = -layer.b(i);
          ++row;
          // value <= pre - m1*(1 - indicator)
          put_pre(row, -1.0);
          model.a(row, unit.var) = 1.0;
          model.a(row, unit.binary) = -unit.m1;
          model.b(row) = layer.b(i) - unit.m1;
          ++row;
          // value >= 0
          model.a(row, unit.var) = -1.0;
          model.b(row) = 0.0;
          ++row;
          // value <= m2 * indicator
          model.a(row, unit.var) = 1.0;
          model.a(row, unit.binary) = -unit.m2;
          model.b(row) = 0.0;
          ++row;
          model.lower(unit.var) = 0.0;
          model.upper(unit.var) = std::max(unit.m2, 0.0);
          model.lower(unit.binary) = 0.0;
          model.upper(unit.binary) = 1.0;
          model.integer[unit.binary] = true;
          break;
        }
      }
    }
    prev_vars = std::move(cur_vars);
  }

  enc.output_vars = prev_vars;
  enc.num_binaries = num_binaries;
  enc.num_rows = num_rows;
  return enc;
}

MilpModel encode_instance(const ProblemInstance& inst) {
  validate_or_throw(inst);
  NetworkEncoding enc = encode_network(inst.network, inst.lower, inst.upper);
  MilpModel model = std::move(enc.model);
  const int p = inst.p();
  const int q = inst.q();

  for (int j = 0; j < p; ++j) {
    model.integer[enc.input_vars[j]] = inst.integrality[j];
    model.lin(enc.input_vars[j]) = inst.c(j);
  }
  for (int k = 0; k < q; ++k) {
    model.lin(enc.output_vars[k]) += inst.d(k);
  }

  const long base = model.a.rows();
  const long extra = inst.m1() + inst.m2();
  if (extra > 0) {
    model.a.conservativeResize(base + extra, Eigen::NoChange);
    model.b.conservativeResize(base + extra);
    model.a.bottomRows(extra).setZero();
    for (int r = 0; r < inst.m1(); ++r) {
      for (int j = 0; j < p; ++j) {
        model.a(base + r, enc.input_vars[j]) = inst.a_mip(r, j);
      }
      model.b(base + r) = inst.b_mip(r);
    }
    const long nn_base = base + inst.m1();
    for (int r = 0; r < inst.m2(); ++r) {
      for (int j = 0; j < p; ++j) {
        model.a(nn_base + r, enc.input_vars[j]) = inst.a_nn(r, j);
      }
      for (int k = 0; k < q; ++k) {
        model.a(nn_base + r, enc.output_vars[k]) += inst.a_nn(r, p + k);
      }
      model.b(nn_base + r) = inst.b_nn(r);
    }
  }
  return model;
}

EncodingStats encoding_stats(const ProblemInstance& inst) {
  NetworkEncoding enc = encode_network(inst.network, inst.lower, inst.upper);
  EncodingStats stats;
  stats.num_vars = enc.model.n();
  stats.num_binaries = enc.num_binaries;
  stats.num_rows = enc.num_rows + inst.m1() + inst.m2();
  return stats;
}

}  // namespace nnmip
