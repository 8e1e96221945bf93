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
// Best-first branch-and-bound over bounded integer boxes. Node bounds
// come from a Lagrangian dual of the coupling rows, so pruning stays
// valid even when the interior-point relaxation is only approximate.

#ifndef NNMIP_BNB_HPP_
#define NNMIP_BNB_HPP_

#include <vector>

#include "nnmip/instance.hpp"
#include "nnmip/milp.hpp"

namespace nnmip {

enum class MilpStatus { kOptimal, kInfeasible, kNodeLimit };

struct MilpResult {
  Vector z;
  double value = kInf;
  MilpStatus status = MilpStatus::kInfeasible;
  long nodes = 0;
  double bound = -kInf;  // best proven lower bound
  // Diagnostics: incumbent value and global bound after each processed
  // node; the first is non-increasing, the second non-decreasing.
  std::vector<double> incumbent_history;
  std::vector<double> bound_history;
};

/// Exact solve of a bounded mixed-integer diagonal QP. The returned value
/// is within gap_tol (absolute) of the global optimum on kOptimal;
/// integer slots hold exactly integral values.
MilpResult solve_milp(const MilpModel& model, double gap_tol = 1e-6,
                      long node_limit = 100000);

/// Discrete-block subproblem of the decomposition:
///   argmin (c - lambda).x + rho/2 |u_prev - x|^2
///   s.t. a_mip x <= b_mip, x integer in the instance box.
/// Constant terms are dropped.
MilpModel build_mip_subproblem(const ProblemInstance& instance,
                               const Vector& u_prev, const Vector& lambda,
                               double rho);

}  // namespace nnmip

#endif  // NNMIP_BNB_HPP_
