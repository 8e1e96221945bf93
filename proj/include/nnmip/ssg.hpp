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
// Single-step gradient baseline: penalized first-order descent on the
// box-relaxed variables with a final rounding step. No dual variables;
// this is the ablation counterpart of the decomposition solver.

#ifndef NNMIP_SSG_HPP_
#define NNMIP_SSG_HPP_

#include <cstdint>

#include "nnmip/instance.hpp"

namespace nnmip {

struct SsgConfig {
  int max_steps = 100;     // T
  double eta0 = 1e-2;      // step size at t = 0
  double eta_decay = 0.01; // eta_t = eta0 * (1 + eta_decay * t)^(-1/2)
  double mu_lin = 50.0;
  double mu_nn = 50.0;
  double feas_tol = 1e-6;  // recheck tolerance at the rounded point
  std::uint64_t seed = 42; // start-point jitter
};

/// eta_t = eta0 * (1 + eta_decay * t)^(-1/2), t counted from 1.
double ssg_step_size(const SsgConfig& config, int t);

/// Penalized descent: at each step the hinge penalties
///   p_lin = max(0, a_mip x - b_mip),  p_nn = max(0, a_nn [x; f(x)] - b_nn)
/// are formed at the current point, one gradient step on
///   c.x + d.f(x) + mu_lin |p_lin|^2 + mu_nn |p_nn|^2
/// is taken, and the iterate is projected back into the box. Whenever both
/// penalty vectors are exactly zero and the linear cost c.x improves, the
/// rounded iterate becomes an incumbent candidate. Candidates are re-checked
/// against the raw constraints after rounding; only verified ones are kept,
/// and discarded ones are counted in the report notes.
///
/// The incumbent test deliberately scores c.x alone (not c.x + d.f(x)); the
/// returned report's objective is the full objective at the accepted point.
SolveReport ssg_solve(const ProblemInstance& instance, const SsgConfig& config);

}  // namespace nnmip

#endif  // NNMIP_SSG_HPP_
