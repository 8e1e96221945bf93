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
// Dense feedforward evaluation, reverse-mode vector-Jacobian products,
// interval bound propagation, and a minimal seeded trainer.

#ifndef NNMIP_NN_ENGINE_HPP_
#define NNMIP_NN_ENGINE_HPP_

#include <cstdint>
#include <vector>

#include "nnmip/common.hpp"
#include "nnmip/nn_model.hpp"

namespace nnmip {

/// Intermediates of one forward pass. Single-use; consumed by vjp.
struct Tape {
  Vector input;
  std::vector<Vector> pre;   // pre-activation per layer
  std::vector<Vector> post;  // post-activation per layer
};

/// Per-neuron pre-activation interval bounds, one pair of vectors per layer.
struct IntervalBounds {
  std::vector<Vector> lo;
  std::vector<Vector> up;
};

/// Evaluates the network at u and records intermediates into tape.
Vector forward(const NnModel& model, const Vector& u, Tape* tape = nullptr);

/// Returns J_f(u)^T w from a tape recorded at u.
/// ReLU subgradient at exactly 0 is taken as 0.
Vector vjp(const NnModel& model, const Tape& tape, const Vector& w);

/// Sound per-neuron pre-activation intervals over the input box [lo, up].
IntervalBounds interval_propagate(const NnModel& model, const Vector& lo,
                                  const Vector& up);

/// Mini-batch gradient descent with logistic loss on binary labels.
/// arch lists hidden widths; the output layer is a single identity logit.
/// Deterministic for a fixed seed; epochs = 0 returns the initialization.
NnModel train_classifier(const Matrix& features, const std::vector<int>& labels,
                         const std::vector<int>& arch, int epochs, double step,
                         std::uint64_t seed, int batch_size = 32);

}  // namespace nnmip

#endif  // NNMIP_NN_ENGINE_HPP_
