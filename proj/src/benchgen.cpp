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

#include "nnmip/benchgen.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "nnmip/nn_engine.hpp"

namespace nnmip {

namespace {

std::string join_doubles(const Vector& v) {
  std::string out;
  for (int i = 0; i < v.size(); ++i) {
    if (i > 0) out += ",";
    out += format_double(v(i));
  }
  return out;
}

std::string join_ints(const std::vector<int>& v) {
  std::string out;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i > 0) out += ",";
    out += std::to_string(v[i]);
  }
  return out;
}

}  // namespace

ProblemInstance gen_smooth_surrogate(const SmoothParams& params) {
  if (params.p < 1) throw Error("smooth generator: p must be >= 1");
  if (!(params.box_hi > params.box_lo)) {
    throw Error("smooth generator: box must be nonempty");
  }
  if (params.box_lo != std::round(params.box_lo) ||
      params.box_hi != std::round(params.box_hi)) {
    throw Error("smooth generator: box bounds must be integers");
  }
  if (params.rho_hint <= 0.0) {
    throw Error("smooth generator: rho_hint must be positive");
  }
  const int p = params.p;
  const double width = params.box_hi - params.box_lo;
  Rng rng(params.seed);

  // Steep affine landscape: |G_i| >= 4 * rho_hint * width guarantees the
  // proximal u-step clamps at the same box vertex from anywhere in the box
  // for any rho <= rho_hint, and the c part can never flip a coordinate.
  Matrix w = Matrix::Zero(p, p);
  Vector bias(p), d(p), c(p), g(p);
  for (int i = 0; i < p; ++i) {
    w(i, i) = rng.uniform(0.5, 2.0);
    bias(i) = rng.uniform(-0.5, 0.5);
    const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
    g(i) = sign * params.rho_hint * width * (4.0 + rng.uniform());
    d(i) = g(i) / w(i, i);
    c(i) = rng.uniform(-0.3, 0.3) * params.rho_hint;
  }

  ProblemInstance inst;
  inst.name = "smooth_p" + std::to_string(p) + "_s" +
              std::to_string(params.seed);
  inst.sense = "min";
  inst.c = c;
  inst.d = d;
  inst.a_mip = Matrix::Zero(0, p);
  inst.b_mip = Vector::Zero(0);
  inst.a_nn = Matrix::Zero(0, 2 * p);
  inst.b_nn = Vector::Zero(0);
  inst.lower = Vector::Constant(p, params.box_lo);
  inst.upper = Vector::Constant(p, params.box_hi);
  inst.integrality.assign(p, true);
  inst.network.layers.push_back({w, bias, Activation::kIdentity});

  // Closed-form optimum: the objective is (c + G).x + d.bias, so each
  // coordinate sits at the bound opposite to its total coefficient.
  Vector x_opt(p);
  for (int i = 0; i < p; ++i) {
    x_opt(i) = (c(i) + g(i)) > 0.0 ? params.box_lo : params.box_hi;
  }
  const double value = (c + g).dot(x_opt) + d.dot(bias);

  inst.info["generator"] = "smooth";
  inst.info["seed"] = std::to_string(params.seed);
  inst.info["rho_hint"] = format_double(params.rho_hint);
  inst.info["lipschitz"] = "0";
  inst.info["optimum_x"] = join_doubles(x_opt);
  inst.info["optimum_value"] = format_double(value);
  validate_or_throw(inst);
  return inst;
}

ProblemInstance gen_water_potability(const WaterParams& params) {
  if (params.n < 1) throw Error("water generator: n must be >= 1");
  if (params.feature_dim < 1) {
    throw Error("water generator: feature_dim must be >= 1");
  }
  if (params.grid_step <= 0.0 || params.adjust_max < params.grid_step) {
    throw Error("water generator: bad adjustment grid");
  }
  const int n = params.n;
  const int f_dim = params.feature_dim;
  const long steps =
      static_cast<long>(std::floor(params.adjust_max / params.grid_step + 1e-9));

  std::vector<double> bud_up = params.budgets_up;
  std::vector<double> bud_down = params.budgets_down;
  if (bud_up.empty()) bud_up.assign(f_dim, 2.0);
  if (bud_down.empty()) bud_down.assign(f_dim, 2.0);
  if (static_cast<int>(bud_up.size()) != f_dim ||
      static_cast<int>(bud_down.size()) != f_dim) {
    throw Error("water generator: budget vectors must have feature_dim entries");
  }

  Rng root(params.seed);

  // Two Gaussian clusters; labels are the cluster of origin.
  const int n_train = 160;
  const double mu = 0.6;
  const double sigma = 0.3;
  Rng data_rng = root.derive(1);
  Matrix feats(n_train, f_dim);
  std::vector<int> labels(n_train);
  for (int s = 0; s < n_train; ++s) {
    const bool potable = s < n_train / 2;
    labels[s] = potable ? 1 : 0;
    const double center = potable ? mu : -mu;
    for (int j = 0; j < f_dim; ++j) {
      feats(s, j) = center + sigma * data_rng.normal();
    }
  }

  // The classifier must score at least n pool samples strictly negative;
  // re-draw the pool (and eventually retrain) a bounded number of times.
  const double kSelectMargin = -0.05;
  NnModel net;
  std::vector<Vector> selected;
  for (int attempt = 0; attempt < 8 && static_cast<int>(selected.size()) < n;
       ++attempt) {
    if (attempt == 0 || attempt >= 3) {
      Rng train_seed = root.derive(100 + attempt);
      net = train_classifier(feats, labels, params.arch, params.train_epochs,
                             params.train_step, train_seed.next_u64());
    }
    selected.clear();
    Rng pool_rng = root.derive(200 + attempt);
    const int pool = std::max(4 * n, 64);
    for (int s = 0; s < pool && static_cast<int>(selected.size()) < n; ++s) {
      Vector w(f_dim);
      for (int j = 0; j < f_dim; ++j) w(j) = -mu + sigma * pool_rng.normal();
      if (forward(net, w)(0) <= kSelectMargin) selected.push_back(w);
    }
  }
  if (static_cast<int>(selected.size()) < n) {
    throw Error("water generator: classifier labels too few samples "
                "non-potable after bounded retries");
  }

  // Variable layout: a adjustments (n*f_dim), b adjustments (n*f_dim),
  // then one potability binary per sample.
  const int p = 2 * n * f_dim + n;
  const auto a_col = [&](int i, int j) { return i * f_dim + j; };
  const auto b_col = [&](int i, int j) { return n * f_dim + i * f_dim + j; };
  const auto y_col = [&](int i) { return 2 * n * f_dim + i; };

  ProblemInstance inst;
  inst.name = "water_n" + std::to_string(n) + "_f" + std::to_string(f_dim) +
              "_s" + std::to_string(params.seed);
  inst.sense = "max";
  // In-memory data is minimization form; the sense tag only drives
  // serialization. Maximizing the potable count minimizes its negation.
  inst.c = Vector::Zero(p);
  for (int i = 0; i < n; ++i) inst.c(y_col(i)) = -1.0;
  inst.d = Vector::Zero(n);
  inst.lower = Vector::Zero(p);
  inst.upper = Vector::Zero(p);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < f_dim; ++j) {
      inst.upper(a_col(i, j)) = static_cast<double>(steps);
      inst.upper(b_col(i, j)) = static_cast<double>(steps);
    }
    inst.upper(y_col(i)) = 1.0;
  }
  inst.integrality.assign(p, true);

  // Per-feature budget rows over the summed adjustments, in feature units.
  inst.a_mip = Matrix::Zero(2 * f_dim, p);
  inst.b_mip = Vector::Zero(2 * f_dim);
  for (int j = 0; j < f_dim; ++j) {
    for (int i = 0; i < n; ++i) {
      inst.a_mip(j, a_col(i, j)) = params.grid_step;
      inst.a_mip(f_dim + j, b_col(i, j)) = params.grid_step;
    }
    inst.b_mip(j) = bud_up[j];
    inst.b_mip(f_dim + j) = bud_down[j];
  }

  // One tiled copy of the classifier per sample. The first layer folds the
  // raw sample into the bias and reads the adjustments off the grid.
  const size_t depth = net.layers.size();
  inst.network.layers.clear();
  for (size_t l = 0; l < depth; ++l) {
    const Layer& src = net.layers[l];
    const int rows = static_cast<int>(src.w.rows());
    const int cols = static_cast<int>(src.w.cols());
    Layer tiled;
    tiled.activation = src.activation;
    if (l == 0) {
      tiled.w = Matrix::Zero(n * rows, p);
      tiled.b = Vector::Zero(n * rows);
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < f_dim; ++j) {
          tiled.w.block(i * rows, a_col(i, j), rows, 1) =
              params.grid_step * src.w.col(j);
          tiled.w.block(i * rows, b_col(i, j), rows, 1) =
              -params.grid_step * src.w.col(j);
        }
        tiled.b.segment(i * rows, rows) = src.b + src.w * selected[i];
      }
    } else {
      tiled.w = Matrix::Zero(n * rows, n * cols);
      tiled.b = Vector::Zero(n * rows);
      for (int i = 0; i < n; ++i) {
        tiled.w.block(i * rows, i * cols, rows, cols) = src.w;
        tiled.b.segment(i * rows, rows) = src.b;
      }
    }
    inst.network.layers.push_back(std::move(tiled));
  }

  // Threshold rows: y_i = 1 forces the sample's logit above 0; with y_i = 0
  // the row relaxes to the interval lower bound and binds nothing.
  const IntervalBounds bounds =
      interval_propagate(inst.network, inst.lower, inst.upper);
  const Vector& logit_lo = bounds.lo.back();
  inst.a_nn = Matrix::Zero(n, p + n);
  inst.b_nn = Vector::Zero(n);
  for (int i = 0; i < n; ++i) {
    const double m1 = logit_lo(i);
    inst.a_nn(i, y_col(i)) = -m1;
    inst.a_nn(i, p + i) = -1.0;
    inst.b_nn(i) = -m1;
  }

  inst.info["generator"] = "water";
  inst.info["seed"] = std::to_string(params.seed);
  inst.info["n"] = std::to_string(n);
  inst.info["feature_dim"] = std::to_string(f_dim);
  inst.info["grid_step"] = format_double(params.grid_step);
  inst.info["indicator"] = "bigm_logit_threshold";
  inst.info["arch"] = join_ints(params.arch);
  validate_or_throw(inst);
  return inst;
}

ProblemInstance gen_tree_planting(const TreeParams& params) {
  if (params.grid_n < 1) throw Error("tree generator: grid_n must be >= 1");
  if (params.species < 1) throw Error("tree generator: species must be >= 1");
  if (params.arch.size() != 1) {
    throw Error("tree generator: exactly one hidden layer is supported");
  }
  const int n = params.grid_n * params.grid_n;
  const int ks = params.species;
  const int env_dim = 6;  // plus the sterilized flag, appended last

  Rng root(params.seed);

  // Site environments and per-species planting costs.
  Rng site_rng = root.derive(1);
  Matrix env(n, env_dim);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < env_dim; ++j) env(i, j) = site_rng.uniform();
  }
  std::vector<double> cost(ks);
  for (int k = 0; k < ks; ++k) cost[k] = site_rng.uniform(1.0, 3.0);

  // Survival surrogates trained on synthetic labels from a hidden linear
  // ground truth over [env; sterilized].
  std::vector<NnModel> nets(ks);
  for (int k = 0; k < ks; ++k) {
    Rng lab_rng = root.derive(10 + k);
    Vector truth(env_dim + 1);
    for (int j = 0; j <= env_dim; ++j) truth(j) = lab_rng.uniform(-2.0, 2.0);
    const int n_train = 120;
    Matrix feats(n_train, env_dim + 1);
    std::vector<int> labels(n_train);
    for (int s = 0; s < n_train; ++s) {
      for (int j = 0; j < env_dim; ++j) feats(s, j) = lab_rng.uniform();
      feats(s, env_dim) = lab_rng.uniform() < 0.5 ? 1.0 : 0.0;
      const double logit = truth.dot(feats.row(s).transpose());
      const double prob = 1.0 / (1.0 + std::exp(-logit));
      labels[s] = lab_rng.uniform() < prob ? 1 : 0;
    }
    Rng train_seed = root.derive(50 + k);
    nets[k] = train_classifier(feats, labels, params.arch, params.train_epochs,
                               params.train_step, train_seed.next_u64());
  }

  // Per-(site, species) rigorous logit bounds over z in [0, 1], then one
  // affine calibration per species mapping the global range into
  // [0.05, 0.9]. The calibrated score stays strictly inside [0, 1) at
  // every box point, which makes the rectifier gating exact.
  Matrix logit_lo(n, ks), logit_hi(n, ks);
  for (int k = 0; k < ks; ++k) {
    for (int i = 0; i < n; ++i) {
      Vector in_lo(env_dim + 1), in_hi(env_dim + 1);
      in_lo.head(env_dim) = env.row(i).transpose();
      in_hi.head(env_dim) = env.row(i).transpose();
      in_lo(env_dim) = 0.0;
      in_hi(env_dim) = 1.0;
      const IntervalBounds b = interval_propagate(nets[k], in_lo, in_hi);
      logit_lo(i, k) = b.lo.back()(0);
      logit_hi(i, k) = b.up.back()(0);
    }
  }
  Vector alpha(ks), beta(ks);
  for (int k = 0; k < ks; ++k) {
    const double lo = logit_lo.col(k).minCoeff();
    const double hi = logit_hi.col(k).maxCoeff();
    if (hi - lo < 1e-12) {
      alpha(k) = 0.0;
      beta(k) = 0.5;
    } else {
      alpha(k) = 0.85 / (hi - lo);
      beta(k) = 0.05 - alpha(k) * lo;
    }
  }

  // Variable layout: planting binaries p_{i,k} at i*ks + k, then
  // sterilization binaries z_i.
  const int p = n * ks + n;
  const auto p_col = [&](int i, int k) { return i * ks + k; };
  const auto z_col = [&](int i) { return n * ks + i; };
  const int q = n * ks;  // one gated contribution per (site, species)

  // Defaults: generous planting budget, half the sites sterilizable,
  // small positive targets only when every species can be planted somewhere.
  const double budget =
      params.plant_budget >= 0.0
          ? params.plant_budget
          : n * *std::max_element(cost.begin(), cost.end()) + 1.0;
  const int beta_cap =
      params.sterilize_budget >= 0 ? params.sterilize_budget : n / 2;
  std::vector<double> targets = params.targets;
  if (targets.empty()) targets.assign(ks, n >= ks ? 0.02 * n : 0.0);
  if (static_cast<int>(targets.size()) != ks) {
    throw Error("tree generator: targets must have one entry per species");
  }

  // Feasibility probe (necessary conditions only): per-species reachable
  // mass, one-species-per-site mass, and the exactly-one cost floor.
  Matrix s_hi(n, ks);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < ks; ++k) {
      s_hi(i, k) = std::min(0.9, alpha(k) * logit_hi(i, k) + beta(k));
    }
  }
  for (int k = 0; k < ks; ++k) {
    if (targets[k] > s_hi.col(k).sum() + 1e-12) {
      throw InfeasibleError("tree generator: survival target " +
                            std::to_string(k) + " exceeds reachable mass");
    }
  }
  double joint = 0.0;
  double total_target = 0.0;
  for (int i = 0; i < n; ++i) joint += s_hi.row(i).maxCoeff();
  for (int k = 0; k < ks; ++k) total_target += targets[k];
  if (total_target > joint + 1e-12) {
    throw InfeasibleError(
        "tree generator: combined survival targets exceed one-species-per-"
        "site mass");
  }
  if (budget + 1e-12 < n * *std::min_element(cost.begin(), cost.end())) {
    throw InfeasibleError(
        "tree generator: planting budget below the exactly-one cost floor");
  }

  ProblemInstance inst;
  inst.name = "tree_g" + std::to_string(params.grid_n) + "_s" +
              std::to_string(params.seed);
  inst.sense = "max";
  // Minimization form in memory: maximize total survival = minimize -sum.
  inst.c = Vector::Zero(p);
  inst.d = -Vector::Ones(q);
  inst.lower = Vector::Zero(p);
  inst.upper = Vector::Ones(p);
  inst.integrality.assign(p, true);

  // Linear rows: exactly-one per site (paired inequalities), one cost row,
  // one sterilization row.
  inst.a_mip = Matrix::Zero(2 * n + 2, p);
  inst.b_mip = Vector::Zero(2 * n + 2);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < ks; ++k) {
      inst.a_mip(2 * i, p_col(i, k)) = 1.0;
      inst.a_mip(2 * i + 1, p_col(i, k)) = -1.0;
    }
    inst.b_mip(2 * i) = 1.0;
    inst.b_mip(2 * i + 1) = -1.0;
  }
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < ks; ++k) {
      inst.a_mip(2 * n, p_col(i, k)) = cost[k];
    }
    inst.a_mip(2 * n + 1, z_col(i)) = 1.0;
  }
  inst.b_mip(2 * n) = budget;
  inst.b_mip(2 * n + 1) = static_cast<double>(beta_cap);

  // Network: per (site, species) block
  //   layer 1: survival hidden units (env folded into bias, z_i read from
  //            its column) plus a rectifier passthrough of p_{i,k};
  //   layer 2: calibrated score s = relu(alpha * logit + beta), passthrough;
  //   layer 3: gate g = relu(s + p - 1), exactly s when planted, 0 when not;
  //   layer 4: identity collecting the gates.
  const int h = static_cast<int>(nets[0].layers[0].w.rows());
  const int block1 = h + 1;
  Layer l1, l2, l3, l4;
  l1.activation = Activation::kRelu;
  l1.w = Matrix::Zero(n * ks * block1, p);
  l1.b = Vector::Zero(n * ks * block1);
  l2.activation = Activation::kRelu;
  l2.w = Matrix::Zero(n * ks * 2, n * ks * block1);
  l2.b = Vector::Zero(n * ks * 2);
  l3.activation = Activation::kRelu;
  l3.w = Matrix::Zero(n * ks, n * ks * 2);
  l3.b = Vector::Zero(n * ks);
  l4.activation = Activation::kIdentity;
  l4.w = Matrix::Identity(n * ks, n * ks);
  l4.b = Vector::Zero(n * ks);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < ks; ++k) {
      const int blk = i * ks + k;
      const Layer& w1 = nets[k].layers[0];
      const Layer& w2 = nets[k].layers[1];
      const int r1 = blk * block1;
      l1.w.block(r1, z_col(i), h, 1) = w1.w.col(env_dim);
      l1.b.segment(r1, h) =
          w1.b + w1.w.leftCols(env_dim) * env.row(i).transpose();
      l1.w(r1 + h, p_col(i, k)) = 1.0;  // passthrough of the planting binary
      const int r2 = blk * 2;
      l2.w.block(r2, r1, 1, h) = alpha(k) * w2.w;
      l2.b(r2) = alpha(k) * w2.b(0) + beta(k);
      l2.w(r2 + 1, r1 + h) = 1.0;
      l3.w(blk, r2) = 1.0;
      l3.w(blk, r2 + 1) = 1.0;
      l3.b(blk) = -1.0;
    }
  }
  inst.network.layers = {std::move(l1), std::move(l2), std::move(l3),
                         std::move(l4)};

  // Survival-target rows couple the gated outputs. A zero target is
  // vacuous (gated outputs are nonnegative by construction) yet would
  // wall off every point whose species sum is exactly zero from the
  // interior methods, so only positive targets emit a row.
  int live = 0;
  for (int k = 0; k < ks; ++k) {
    if (targets[k] > 0.0) ++live;
  }
  inst.a_nn = Matrix::Zero(live, p + q);
  inst.b_nn = Vector::Zero(live);
  for (int k = 0, r = 0; k < ks; ++k) {
    if (targets[k] <= 0.0) continue;
    for (int i = 0; i < n; ++i) inst.a_nn(r, p + p_col(i, k)) = -1.0;
    inst.b_nn(r) = -targets[k];
    ++r;
  }

  inst.info["generator"] = "tree";
  inst.info["seed"] = std::to_string(params.seed);
  inst.info["grid_n"] = std::to_string(params.grid_n);
  inst.info["species"] = std::to_string(ks);
  inst.info["gating"] = "relu_passthrough";
  inst.info["arch"] = join_ints(params.arch);
  inst.info["targets"] = join_doubles(
      Eigen::Map<const Vector>(targets.data(), targets.size()));
  validate_or_throw(inst);
  return inst;
}

}  // namespace nnmip
