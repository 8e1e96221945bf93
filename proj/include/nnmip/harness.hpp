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
// Experiment runner: the monolithic Big-M pipeline, the desk-scale study
// families, and the e1/e2/e3/e5 sweeps. The families are shared between
// the command-line experiments and the library's verification suites so
// both measure the same population.

#ifndef NNMIP_HARNESS_HPP_
#define NNMIP_HARNESS_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "nnmip/benchgen.hpp"
#include "nnmip/dd.hpp"
#include "nnmip/instance.hpp"
#include "nnmip/ssg.hpp"
#include "nnmip/subsolver.hpp"

namespace nnmip {

/// Compiles the network into one monolithic MILP and solves it exactly.
/// The report's objective is re-evaluated at the integer point from raw
/// instance data, never read off the encoding.
SolveReport solve_bigm(const ProblemInstance& instance,
                       double gap_tol = 1e-6, long node_limit = 100000);

/// Paper seed set.
std::vector<std::uint64_t> default_seeds();

// ---------------------------------------------------------------------------
// Study families. Deterministic in (index, seed); every family stays within
// the desk-scale caps (p <= 8, hidden width <= 32, n <= 16).

/// Small instances on which the decomposition is expected to land on the
/// exact optimum: steep affine surrogates, steep-cost rectifier nets, and
/// one-sample water instances. index selects the class round-robin.
ProblemInstance exactness_instance(int index, std::uint64_t seed);

/// Outer-loop configuration tuned for the exactness family (steep descent
/// reaches box faces within the inner budget; adaptation cleans up the
/// interior tail).
DdConfig exactness_config();

/// Instances whose network-block rows touch only the inputs, so both
/// subsolvers apply; the optimum sits against an active row.
ProblemInstance uonly_instance(int index, std::uint64_t seed);

/// Configuration for the u-only family (both subsolvers, same outer loop).
DdConfig uonly_config();

/// Mixed family for the ablation comparison: exactness classes plus
/// budget-constrained instances where rounding tends to break feasibility.
ProblemInstance ablation_instance(int index, std::uint64_t seed);

/// One instance with a parameter count close to target_params (single
/// hidden layer, fixed input dimension), for the scaling sweep.
ProblemInstance scaling_instance(long target_params, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Experiments. Each returns full CSV content (header + rows); cells run in
// parallel up to jobs, assembly is deterministic.

struct E1Params {
  std::vector<int> sizes = {2, 4};        // water samples per instance
  std::vector<std::uint64_t> seeds;       // default: paper seeds
  int jobs = 1;
};
std::string run_e1(const E1Params& params);

struct E2Params {
  std::vector<long> param_counts = {1000, 10000, 100000};
  std::vector<std::uint64_t> seeds;       // default: paper seeds
  int outer_iters = 12;
  int repeats = 5;
  int jobs = 1;
};
/// Per-cell rows plus fitted log-log slope of the median network-phase
/// per-iteration time and the relative spread of the MIP-phase time.
std::string run_e2(const E2Params& params);

struct E3Params {
  int count = 20;
  std::vector<std::uint64_t> seeds;       // default: paper seeds
  int jobs = 1;
};
std::string run_e3(const E3Params& params);

struct E5Params {
  int count = 10;
  std::vector<std::uint64_t> seeds;       // default: paper seeds
  int jobs = 1;
};
std::string run_e5(const E5Params& params);

/// Reserved experiment name; architecture adaptability is out of scope.
std::string e4_notice();

/// Least-squares slope of log(y) against log(x). Requires positive data.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace nnmip

#endif  // NNMIP_HARNESS_HPP_
