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

#ifndef NNMIP_MILP_HPP_
#define NNMIP_MILP_HPP_

#include <vector>

#include "nnmip/common.hpp"

namespace nnmip {

/// Bounded mixed-integer convex QP with a diagonal quadratic:
///   min  sum_i 0.5 * q_diag_i * z_i^2 + lin_i * z_i  (+ constant)
///   s.t. a z <= b,  lower <= z <= upper,  z_i integer where flagged.
struct MilpModel {
  Vector q_diag;  // >= 0 componentwise
  Vector lin;
  Matrix a;       // m x n
  Vector b;       // m
  Vector lower;
  Vector upper;
  std::vector<bool> integer;
  double constant = 0.0;

  int n() const { return static_cast<int>(lin.size()); }
  int m() const { return static_cast<int>(b.size()); }
};

/// Objective at a point, from raw data (constant included).
double evaluate(const MilpModel& model, const Vector& z);

/// max(0, max_i (a z - b)_i); 0 when m = 0.
double row_violation(const MilpModel& model, const Vector& z);

}  // namespace nnmip

#endif  // NNMIP_MILP_HPP_
