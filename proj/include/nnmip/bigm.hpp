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
// Compiles a ReLU network into an exact MILP fragment: one continuous
// variable per unit, a binary per unstable unit with the four indicator
// rows, and binary-free pass-throughs for sign-stable units.

#ifndef NNMIP_BIGM_HPP_
#define NNMIP_BIGM_HPP_

#include <vector>

#include "nnmip/instance.hpp"
#include "nnmip/milp.hpp"
#include "nnmip/nn_model.hpp"

namespace nnmip {

struct NetworkEncoding {
  MilpModel model;                // inputs first, then per-layer variables
  std::vector<int> input_vars;    // indices of the network inputs
  std::vector<int> output_vars;   // indices of the network outputs
  long num_binaries = 0;          // unstable hidden units
  long num_rows = 0;              // total inequality rows emitted
};

/// Encodes forward(model, x) over the given input box. The fragment has
/// no objective; callers add costs and extra rows on top.
NetworkEncoding encode_network(const NnModel& model, const Vector& input_lo,
                               const Vector& input_up);

/// Monolithic MILP equivalent of an instance: its optimum equals the
/// instance optimum over the integer box.
MilpModel encode_instance(const ProblemInstance& instance);

struct EncodingStats {
  long num_vars = 0;
  long num_binaries = 0;
  long num_rows = 0;
};

EncodingStats encoding_stats(const ProblemInstance& instance);

}  // namespace nnmip

#endif  // NNMIP_BIGM_HPP_
