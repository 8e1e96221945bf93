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
// Problem data model: a mixed-integer block coupled to a trained network
// through shared input variables, plus validation and report plumbing.

#ifndef NNMIP_INSTANCE_HPP_
#define NNMIP_INSTANCE_HPP_

#include <map>
#include <string>
#include <vector>

#include "nnmip/common.hpp"
#include "nnmip/nn_model.hpp"

namespace nnmip {

/// min c.x + d.f(x)  s.t.  a_mip x <= b_mip,  a_nn [x; f(x)] <= b_nn,
/// x integer in [lower, upper]. Instances loaded with sense "max" are
/// negated on ingestion, so in-memory data is always minimization form.
struct ProblemInstance {
  std::string name;
  std::string sense = "min";  // sense of the serialized form
  std::map<std::string, std::string> info;

  Vector c;       // p
  Vector d;       // q
  Matrix a_mip;   // m1 x p
  Vector b_mip;   // m1
  Matrix a_nn;    // m2 x (p+q)
  Vector b_nn;    // m2
  Vector lower;   // p
  Vector upper;   // p
  std::vector<bool> integrality;  // all true in this artifact
  NnModel network;

  int p() const { return static_cast<int>(c.size()); }
  int q() const { return static_cast<int>(d.size()); }
  int m1() const { return static_cast<int>(b_mip.size()); }
  int m2() const { return static_cast<int>(b_nn.size()); }
};

/// One invariant violation; path is an index path like "network.layers[2]".
struct Violation {
  std::string path;
  std::string message;
};

/// Returns every dimension/box/activation violation; empty means ok.
std::vector<Violation> validate(const ProblemInstance& instance);

/// Throws Error listing all violations unless validate() is clean.
void validate_or_throw(const ProblemInstance& instance);

/// c.x + d.f(x), recomputed from raw data.
double objective_value(const ProblemInstance& instance, const Vector& x);

/// max(0, max_i (a_mip x - b_mip)_i); 0 when m1 = 0.
double mip_violation(const ProblemInstance& instance, const Vector& x);

/// max(0, max_j (a_nn [x; f(x)] - b_nn)_j); 0 when m2 = 0.
double nn_violation(const ProblemInstance& instance, const Vector& x);

/// Result of one solver run. Times are wall-clock and excluded from
/// determinism guarantees.
struct SolveReport {
  double objective = 0.0;
  Vector x_final;
  Vector u_final;
  double primal_residual = 0.0;   // |u - x|_inf
  double mip_feasibility = 0.0;   // max violation of a_mip x <= b_mip
  double nn_feasibility = 0.0;    // max violation at [x; f(x)]
  long iterations = 0;
  bool converged = false;
  std::map<std::string, double> phase_times;

  // Reporting extras consumed by the CSV emitters.
  std::string instance_name;
  std::string method;
  std::string subsolver;
  std::string status = "ok";
  std::string notes;  // free-form diagnostics, e.g. discarded incumbents
  long seed = 0;
  long nodes = 0;
  long binaries = 0;
  long rows = 0;
};

}  // namespace nnmip

#endif  // NNMIP_INSTANCE_HPP_
