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

#ifndef NNMIP_NN_MODEL_HPP_
#define NNMIP_NN_MODEL_HPP_

#include <cstddef>
#include <vector>

#include "nnmip/common.hpp"

namespace nnmip {

enum class Activation { kRelu, kIdentity };

/// One dense layer: out = activation(w * in + b).
struct Layer {
  Matrix w;
  Vector b;
  Activation activation = Activation::kRelu;
};

/// Feedforward network. Layers must chain dimensionally and the final
/// layer must be identity when the model is embedded in a MILP.
struct NnModel {
  std::vector<Layer> layers;

  int input_dim() const {
    return layers.empty() ? 0 : static_cast<int>(layers.front().w.cols());
  }
  int output_dim() const {
    return layers.empty() ? 0 : static_cast<int>(layers.back().w.rows());
  }
  /// Total number of trainable scalars (weights plus biases).
  long param_count() const {
    long n = 0;
    for (const Layer& l : layers) n += l.w.size() + l.b.size();
    return n;
  }
};

}  // namespace nnmip

#endif  // NNMIP_NN_MODEL_HPP_
