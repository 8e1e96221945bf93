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
// Continuous relaxation engine: a primal-dual interior method with a
// Mehrotra predictor-corrector step, used for LPs and diagonal QPs.

#ifndef NNMIP_RELAXATION_HPP_
#define NNMIP_RELAXATION_HPP_

#include "nnmip/milp.hpp"

namespace nnmip {

enum class RelaxStatus { kOptimal, kInfeasible };

struct RelaxResult {
  Vector z;
  double value = 0.0;          // true objective, regularization excluded
  RelaxStatus status = RelaxStatus::kOptimal;
  Vector row_duals;            // multipliers for the a-rows only, >= 0
  double kkt_residual = kInf;  // max of stationarity/feasibility residuals
  int iterations = 0;
};

/// Solves the continuous relaxation (integrality ignored). Pure LPs get a
/// 1e-9 diagonal regularization inside the Newton systems; the reported
/// value always uses the model's own q_diag. Infeasibility is declared
/// only with a Farkas-style certificate from an elastic phase-1 solve.
/// Throws Error if the iteration fails to converge on a feasible model.
RelaxResult solve_relaxation(const MilpModel& model);

}  // namespace nnmip

#endif  // NNMIP_RELAXATION_HPP_
