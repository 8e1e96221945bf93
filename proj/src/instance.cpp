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

#include "nnmip/instance.hpp"

#include <cmath>
#include <sstream>

#include "nnmip/nn_engine.hpp"

namespace nnmip {

namespace {

bool all_finite(const Matrix& m) { return m.allFinite(); }
bool all_finite(const Vector& v) { return v.allFinite(); }

void check_finite(const Matrix& m, const std::string& path,
                  std::vector<Violation>* out) {
  if (!all_finite(m)) out->push_back({path, "non-finite value"});
}

void check_finite(const Vector& v, const std::string& path,
                  std::vector<Violation>* out) {
  if (!all_finite(v)) out->push_back({path, "non-finite value"});
}

}  // namespace

std::vector<Violation> validate(const ProblemInstance& inst) {
  std::vector<Violation> v;
  const int p = inst.p();
  const int q = inst.q();

  if (inst.sense != "min" && inst.sense != "max") {
    v.push_back({"meta.sense", "sense must be 'min' or 'max'"});
  }
  if (p < 1) v.push_back({"mip.c", "at least one decision variable required"});

  check_finite(inst.c, "mip.c", &v);
  check_finite(inst.d, "nn_block.d", &v);
  check_finite(inst.a_mip, "mip.a_mip", &v);
  check_finite(inst.b_mip, "mip.b_mip", &v);
  check_finite(inst.a_nn, "nn_block.a_nn", &v);
  check_finite(inst.b_nn, "nn_block.b_nn", &v);
  check_finite(inst.lower, "mip.lower", &v);
  check_finite(inst.upper, "mip.upper", &v);

  if (inst.a_mip.rows() != inst.b_mip.size()) {
    v.push_back({"mip.a_mip", "row count differs from b_mip length"});
  }
  if (inst.a_mip.size() > 0 && inst.a_mip.cols() != p) {
    v.push_back({"mip.a_mip", "a_mip width mismatch (expected p columns)"});
  }
  if (inst.a_nn.rows() != inst.b_nn.size()) {
    v.push_back({"nn_block.a_nn", "row count differs from b_nn length"});
  }
  if (inst.a_nn.size() > 0 && inst.a_nn.cols() != p + q) {
    v.push_back({"nn_block.a_nn", "a_nn width mismatch (expected p+q columns)"});
  }
  if (inst.lower.size() != p) v.push_back({"mip.lower", "length != p"});
  if (inst.upper.size() != p) v.push_back({"mip.upper", "length != p"});
  if (inst.lower.size() == inst.upper.size() && inst.lower.size() == p &&
      (inst.lower.array() > inst.upper.array()).any()) {
    v.push_back({"mip.lower", "empty box (lower > upper somewhere)"});
  }
  if (static_cast<int>(inst.integrality.size()) != p) {
    v.push_back({"mip.integrality", "length != p"});
  }

  const NnModel& net = inst.network;
  if (net.layers.empty()) {
    v.push_back({"network.layers", "network must have at least one layer"});
  } else {
    if (net.input_dim() != p) {
      v.push_back({"network", "input_dim != p"});
    }
    if (net.output_dim() != q) {
      v.push_back({"network", "output_dim != q"});
    }
    int prev = net.input_dim();
    for (size_t l = 0; l < net.layers.size(); ++l) {
      const Layer& layer = net.layers[l];
      std::ostringstream path;
      path << "network.layers[" << l << "]";
      if (layer.w.cols() != prev) {
        v.push_back({path.str(), "weight columns do not chain with the"
                                 " previous layer's output"});
      }
      if (layer.w.rows() != layer.b.size()) {
        v.push_back({path.str(), "bias length differs from weight rows"});
      }
      check_finite(layer.w, path.str() + ".weights", &v);
      check_finite(layer.b, path.str() + ".bias", &v);
      prev = static_cast<int>(layer.w.rows());
    }
    if (net.layers.back().activation != Activation::kIdentity) {
      v.push_back({"network.layers", "final layer must be identity"});
    }
  }
  return v;
}

void validate_or_throw(const ProblemInstance& inst) {
  const std::vector<Violation> v = validate(inst);
  if (v.empty()) return;
  std::ostringstream msg;
  msg << "instance '" << inst.name << "' failed validation:";
  for (const Violation& violation : v) {
    msg << "\n  " << violation.path << ": " << violation.message;
  }
  throw Error(msg.str());
}

double objective_value(const ProblemInstance& inst, const Vector& x) {
  double value = inst.c.dot(x);
  if (inst.q() > 0) value += inst.d.dot(forward(inst.network, x));
  return value;
}

double mip_violation(const ProblemInstance& inst, const Vector& x) {
  if (inst.m1() == 0) return 0.0;
  return std::max(0.0, (inst.a_mip * x - inst.b_mip).maxCoeff());
}

double nn_violation(const ProblemInstance& inst, const Vector& x) {
  if (inst.m2() == 0) return 0.0;
  Vector xy(inst.p() + inst.q());
  xy.head(inst.p()) = x;
  xy.tail(inst.q()) = forward(inst.network, x);
  return std::max(0.0, (inst.a_nn * xy - inst.b_nn).maxCoeff());
}

}  // namespace nnmip
