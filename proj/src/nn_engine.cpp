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

#include "nnmip/nn_engine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace nnmip {

namespace {

Vector apply_activation(const Vector& pre, Activation act) {
  if (act == Activation::kIdentity) return pre;
  return pre.cwiseMax(0.0);
}

}  // namespace

Vector forward(const NnModel& model, const Vector& u, Tape* tape) {
  if (u.size() != model.input_dim()) {
    throw Error("forward: input has dimension " + std::to_string(u.size()) +
                ", network expects " + std::to_string(model.input_dim()));
  }
  if (tape != nullptr) {
    tape->input = u;
    tape->pre.clear();
    tape->post.clear();
    tape->pre.reserve(model.layers.size());
    tape->post.reserve(model.layers.size());
  }
  Vector a = u;
  for (const Layer& layer : model.layers) {
    Vector pre = layer.w * a + layer.b;
    a = apply_activation(pre, layer.activation);
    if (tape != nullptr) {
      tape->pre.push_back(std::move(pre));
      tape->post.push_back(a);
    }
  }
  return a;
}

Vector vjp(const NnModel& model, const Tape& tape, const Vector& w) {
  const int depth = static_cast<int>(model.layers.size());
  if (static_cast<int>(tape.pre.size()) != depth) {
    throw Error("vjp: tape does not match the network depth");
  }
  if (w.size() != model.output_dim()) {
    throw Error("vjp: weight vector has dimension " + std::to_string(w.size()) +
                ", network outputs " + std::to_string(model.output_dim()));
  }
  Vector g = w;
  for (int l = depth - 1; l >= 0; --l) {
    const Layer& layer = model.layers[l];
    if (layer.activation == Activation::kRelu) {
      // Subgradient 0 at the kink: strict inequality.
      g = (tape.pre[l].array() > 0.0).select(g, 0.0);
    }
    g = layer.w.transpose() * g;
  }
  return g;
}

IntervalBounds interval_propagate(const NnModel& model, const Vector& lo,
                                  const Vector& up) {
  if (lo.size() != up.size() || lo.size() != model.input_dim()) {
    throw Error("interval_propagate: box dimension mismatch");
  }
  if ((lo.array() > up.array()).any()) {
    throw Error("interval_propagate: empty box");
  }
  IntervalBounds bounds;
  Vector in_lo = lo;
  Vector in_up = up;
  for (const Layer& layer : model.layers) {
    const Matrix wp = layer.w.cwiseMax(0.0);
    const Matrix wn = layer.w.cwiseMin(0.0);
    Vector pre_lo = wp * in_lo + wn * in_up + layer.b;
    Vector pre_up = wp * in_up + wn * in_lo + layer.b;
    bounds.lo.push_back(pre_lo);
    bounds.up.push_back(pre_up);
    if (layer.activation == Activation::kRelu) {
      in_lo = pre_lo.cwiseMax(0.0);
      in_up = pre_up.cwiseMax(0.0);
    } else {
      in_lo = std::move(pre_lo);
      in_up = std::move(pre_up);
    }
  }
  return bounds;
}

NnModel train_classifier(const Matrix& features, const std::vector<int>& labels,
                         const std::vector<int>& arch, int epochs, double step,
                         std::uint64_t seed, int batch_size) {
  const int n = static_cast<int>(features.rows());
  const int in_dim = static_cast<int>(features.cols());
  if (n < 1) throw Error("train_classifier: need at least one sample");
  if (static_cast<int>(labels.size()) != n) {
    throw Error("train_classifier: label count mismatch");
  }

  Rng rng(seed);
  NnModel model;
  int prev = in_dim;
  std::vector<int> widths(arch);
  widths.push_back(1);  // identity logit head
  for (size_t l = 0; l < widths.size(); ++l) {
    Layer layer;
    const int out = widths[l];
    const double s = std::sqrt(6.0 / (prev + out));
    layer.w.resize(out, prev);
    for (int i = 0; i < out; ++i) {
      for (int j = 0; j < prev; ++j) layer.w(i, j) = rng.uniform(-s, s);
    }
    layer.b = Vector::Zero(out);
    layer.activation =
        (l + 1 == widths.size()) ? Activation::kIdentity : Activation::kRelu;
    model.layers.push_back(std::move(layer));
    prev = out;
  }

  const int bs = std::max(1, std::min(batch_size, n));
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  const int depth = static_cast<int>(model.layers.size());

  for (int epoch = 0; epoch < epochs; ++epoch) {
    // Fisher-Yates with the run's own stream keeps epochs reproducible.
    for (int i = n - 1; i > 0; --i) {
      std::swap(order[i], order[rng.uniform_int(0, i)]);
    }
    for (int start = 0; start < n; start += bs) {
      const int end = std::min(start + bs, n);
      std::vector<Matrix> gw(depth);
      std::vector<Vector> gb(depth);
      for (int l = 0; l < depth; ++l) {
        gw[l] = Matrix::Zero(model.layers[l].w.rows(), model.layers[l].w.cols());
        gb[l] = Vector::Zero(model.layers[l].b.size());
      }
      for (int s = start; s < end; ++s) {
        const int idx = order[s];
        Tape tape;
        const Vector out = forward(model, features.row(idx).transpose(), &tape);
        const double z = out(0);
        // d/dz of softplus(z) - y*z, numerically stable for large |z|.
        const double sig = z >= 0 ? 1.0 / (1.0 + std::exp(-z))
                                  : std::exp(z) / (1.0 + std::exp(z));
        Vector g(1);
        g(0) = sig - static_cast<double>(labels[idx]);
        for (int l = depth - 1; l >= 0; --l) {
          const Layer& layer = model.layers[l];
          if (layer.activation == Activation::kRelu) {
            g = (tape.pre[l].array() > 0.0).select(g, 0.0);
          }
          const Vector& a_prev = (l == 0) ? tape.input : tape.post[l - 1];
          gw[l] += g * a_prev.transpose();
          gb[l] += g;
          if (l > 0) g = layer.w.transpose() * g;
        }
      }
      const double scale = step / static_cast<double>(end - start);
      for (int l = 0; l < depth; ++l) {
        model.layers[l].w -= scale * gw[l];
        model.layers[l].b -= scale * gb[l];
      }
    }
  }
  return model;
}

}  // namespace nnmip
