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
// Outer decomposition loop: alternate the discrete proximal subproblem
// and the continuous network subproblem, update multipliers on the
// coupling u = x, adapt the penalty, and monitor the merit function.

#ifndef NNMIP_DD_HPP_
#define NNMIP_DD_HPP_

#include <cstdint>
#include <vector>

#include "nnmip/instance.hpp"
#include "nnmip/subsolver.hpp"

namespace nnmip {

struct DdConfig {
  double rho0 = 10.0;
  double eta = 0.01;                   // subsolver step size
  double epsilon = 1e-4;               // |u - x|_inf convergence tolerance
  int max_outer = 50;
  int inner_steps = 25;
  double rho_growth = 2.0;             // beta
  double residual_stall_factor = 0.9;
  double lambda_bound = 1e6;
  double time_budget_s = 300.0;
  bool adapt_rho_enabled = true;       // fixed-penalty runs switch this off
};

struct DdHistoryEntry {
  int k = 0;
  double residual2 = 0.0;  // |u - x|_2, drives penalty adaptation
  double merit = 0.0;
  double rho = 0.0;
};

struct DdState {
  Vector x;
  Vector u;
  Vector lambda;
  double rho = 0.0;
  int k = 0;
  std::vector<DdHistoryEntry> history;
  long lambda_clamp_events = 0;
};

/// Per-iteration merit values, extracted from a run's history.
struct MeritTrace {
  std::vector<double> values;
};

struct TraceRow {
  int k = 0;
  double residual_inf = 0.0;
  double residual_2 = 0.0;
  double merit = 0.0;
  double rho = 0.0;
  double mip_time_s = 0.0;
  double nn_time_s = 0.0;
  bool inner_converged = false;
  double inner_violation = 0.0;
};

struct DdTrace {
  std::vector<TraceRow> rows;
};

/// lambda <- clamp(lambda + rho (u - x), +-lambda_bound); clamp events
/// are counted on the returned state.
DdState dual_update(DdState state, const DdConfig& config);

/// Penalty adaptation: grow by beta when the 2-norm residual stalls,
/// shrink by beta (floored at rho0/10) after a 10x decrease across the
/// last five iterations, otherwise keep the current value.
double adapt_rho(const DdState& state, const DdConfig& config);

/// g(u) + c.x + rho/2 |u - x + lambda/rho|^2 - |lambda|^2 / (2 rho).
double merit(const DdState& state, const ProblemInstance& instance);

/// Empirical gradient-Lipschitz constant of g(u) = d.f(u): the largest
/// pairwise ratio |grad(u1) - grad(u2)| / |u1 - u2| over seeded samples
/// from the box. Coincident sample pairs are redrawn.
double estimate_smoothness(const NnModel& model, const Vector& d,
                           const Vector& box_lo, const Vector& box_up,
                           int samples, std::uint64_t seed = 0);

/// Runs the full decomposition. Convergence is |u - x|_inf < epsilon,
/// checked after the dual update. Feasibility fields of the report are
/// always evaluated at the integer point. Throws InfeasibleError when a
/// subproblem is proven infeasible (message carries the iteration).
SolveReport dd_solve(const ProblemInstance& instance, const DdConfig& config,
                     SubsolverKind kind = SubsolverKind::kAuto,
                     DdTrace* trace = nullptr);

MeritTrace merit_trace(const DdTrace& trace);

}  // namespace nnmip

#endif  // NNMIP_DD_HPP_
