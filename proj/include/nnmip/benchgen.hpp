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
//
// Synthetic benchmark instances at desk scale. Three families:
//  - water: treat non-potable samples across a classifier's 0-logit line
//    under per-feature adjustment budgets (count maximization);
//  - tree: assign species to grid sites under cost/sterilization budgets
//    with survival-target rows through trained per-species surrogates;
//  - smooth: affine-network family where the decomposition's smoothness
//    hypotheses hold exactly and the optimum has a closed form.
// All generation is seed-deterministic end to end.

#ifndef NNMIP_BENCHGEN_HPP_
#define NNMIP_BENCHGEN_HPP_

#include <cstdint>
#include <vector>

#include "nnmip/instance.hpp"

namespace nnmip {

struct WaterParams {
  int n = 4;                 // non-potable samples to treat
  int feature_dim = 9;
  double grid_step = 0.25;   // adjustment discretization delta
  double adjust_max = 2.0;   // per-variable adjustment range [0, adjust_max]
  std::vector<double> budgets_up;    // per-feature totals; default 2.0 each
  std::vector<double> budgets_down;  // per-feature totals; default 2.0 each
  std::vector<int> arch = {8};       // classifier hidden widths
  int train_epochs = 200;
  double train_step = 0.2;
  std::uint64_t seed = 42;
};

/// Two seeded Gaussian clusters, a classifier trained on them, and n
/// samples the classifier scores non-potable. Decision variables are the
/// per-sample per-feature up/down adjustments on an integer grid plus one
/// potability binary per sample; the binary is tied to the classifier
/// logit through a threshold row in the network block. Sense is maximize.
/// Throws Error when the pool keeps too few non-potable samples after
/// bounded re-draws.
ProblemInstance gen_water_potability(const WaterParams& params);

struct TreeParams {
  int grid_n = 2;            // sites = grid_n * grid_n
  int species = 4;
  double plant_budget = -1.0;     // B; negative means "generous" default
  int sterilize_budget = -1;      // beta; negative means half the sites
  std::vector<double> targets;    // gamma_k; default 0.05 * sites each
  std::vector<int> arch = {4};    // survival net hidden widths
  int train_epochs = 150;
  double train_step = 0.2;
  std::uint64_t seed = 42;
};

/// Species assignment on a grid with survival surrogates. Decision
/// variables are the planting binaries p_{i,k} and sterilization binaries
/// z_i. The network maps them to one gated survival contribution per
/// (site, species): the calibrated surrogate score is counted only where
/// the species is planted, realized with exact rectifier gating (no
/// threshold constants). Survival-target rows couple the outputs; the
/// exactly-one, cost, and sterilization rows are linear. Sense is
/// maximize. Throws InfeasibleError when the feasibility probe shows a
/// target is unreachable.
ProblemInstance gen_tree_planting(const TreeParams& params);

struct SmoothParams {
  int p = 3;
  double box_lo = 0.0;
  double box_hi = 3.0;
  double rho_hint = 10.0;    // family is calibrated for rho <= rho_hint
  std::uint64_t seed = 42;
};

/// Affine-network family: f(u) = W u + b with identity activations, so
/// g(u) = d.f(u) is affine and its gradient has Lipschitz constant 0.
/// Coefficients are steep relative to rho_hint * box width, which makes
/// the integer optimum a box vertex with a closed form; that optimum is
/// recorded in the instance metadata (optimum_x, optimum_value keys, both
/// in minimization form).
ProblemInstance gen_smooth_surrogate(const SmoothParams& params);

}  // namespace nnmip

#endif  // NNMIP_BENCHGEN_HPP_
