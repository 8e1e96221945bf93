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
// Interchangeable solvers for the continuous block: projected gradient
// with adaptive-moment steps for cheaply projectable row sets, and a
// log-barrier interior method for rows that couple the network output.

#ifndef NNMIP_SUBSOLVER_HPP_
#define NNMIP_SUBSOLVER_HPP_

#include "nnmip/instance.hpp"

namespace nnmip {

enum class SubsolverKind { kPgd, kBarrier, kAuto };

struct SubsolverRequest {
  const ProblemInstance* instance = nullptr;
  Vector x_k;
  Vector lambda;
  double rho = 0.0;
  Vector u_start;
  int inner_budget = 25;
  double eta = 0.01;  // step size for the adaptive-moment updates
};

struct SubsolverResult {
  Vector u;
  double objective = 0.0;  // d.f(u) + lambda.(u - x) + rho/2 |u - x|^2
  double violation = 0.0;  // max over all nn-block rows at [u; f(u)]
  bool inner_converged = false;
  int inner_iterations = 0;
};

/// Objective of the continuous subproblem at u.
double subproblem_objective(const SubsolverRequest& request, const Vector& u);

/// True when some nn-block row has a nonzero coefficient on a network
/// output column; those rows admit no cheap Euclidean projection.
bool has_coupled_rows(const ProblemInstance& instance);

/// Resolves kAuto: barrier when coupled rows exist, pgd otherwise.
SubsolverKind route_subsolver(const ProblemInstance& instance,
                              SubsolverKind requested);

/// Extracts the nn-block rows that touch only the u columns.
void u_only_rows(const ProblemInstance& instance, Matrix* rows_a,
                 Vector* rows_b);

/// Exact Euclidean projection onto box ∩ {rows_a u <= rows_b}, via the
/// relaxation engine. Rows must involve u only.
Vector project_feasible(const Vector& u, const Vector& lower,
                        const Vector& upper, const Matrix& rows_a,
                        const Vector& rows_b);

/// Adaptive-moment projected gradient. Projects onto the box and the
/// u-only rows; coupled rows, if forced through this path, are reported
/// in `violation` rather than enforced. Returns the best iterate seen.
SubsolverResult pgd_step(const SubsolverRequest& request);

/// Damped-Newton log-barrier over all nn-block rows plus the box, with
/// conjugate-gradient inner solves. Maintains strictly feasible iterates;
/// runs an elastic phase-1 when u_start is not strictly feasible.
/// Throws InfeasibleError when phase-1 cannot find an interior point.
SubsolverResult barrier_solve(const SubsolverRequest& request, double mu0 = 1.0,
                              double mu_shrink = 0.1, int newton_iters = 25,
                              int cg_iters = 5);

/// Dispatch by kind (kAuto routed first).
SubsolverResult run_subsolver(const SubsolverRequest& request,
                              SubsolverKind kind);

}  // namespace nnmip

#endif  // NNMIP_SUBSOLVER_HPP_
