/*
 * Copyright 2026 The FedAudit Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef FEDAUDIT_NN_LAYER_H_
#define FEDAUDIT_NN_LAYER_H_

#include <cstddef>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "fedaudit/nn/rng.h"
#include "fedaudit/nn/tensor.h"

namespace fedaudit::nn {

struct Activation {
  enum class Kind { kLeakyRelu, kTanh };

  Kind kind = Kind::kLeakyRelu;
  // Negative-side slope; only meaningful for kLeakyRelu.
  double alpha = 0.4;

  static Activation LeakyRelu(double alpha) { return {Kind::kLeakyRelu, alpha}; }
  static Activation Tanh() { return {Kind::kTanh, 0.0}; }

  double Apply(double z) const;
  // Derivative with respect to the pre-activation z.
  double Derivative(double z) const;

  friend bool operator==(const Activation&, const Activation&) = default;
};

// One dense layer: output = activation(weights * input + bias).
struct LayerParams {
  Tensor2 weights;  // out_dim x in_dim
  std::vector<double> bias;
  Activation activation;

  size_t in_dim() const { return weights.cols(); }
  size_t out_dim() const { return weights.rows(); }
  size_t ParameterCount() const { return weights.size() + bias.size(); }

  friend bool operator==(const LayerParams&, const LayerParams&) = default;
};

// Uniform fan-in initialisation in [-1/sqrt(in), 1/sqrt(in)], zero bias.
LayerParams InitLayer(size_t in_dim, size_t out_dim, Activation activation, Rng& rng);

absl::Status ValidateLayer(const LayerParams& layer);
// Checks that consecutive layers chain (out_dim of l == in_dim of l+1).
absl::Status ValidateChain(std::span<const LayerParams> layers);

absl::StatusOr<Tensor2> DenseForward(const Tensor2& input, const LayerParams& layer);

// Per-layer values recorded by ForwardAll. pre[l] and post[l] are the batch
// pre- and post-activations of layer l; input is the batch fed to layer 0.
struct ForwardCache {
  Tensor2 input;
  std::vector<Tensor2> pre;
  std::vector<Tensor2> post;

  // Input seen by layer l.
  const Tensor2& LayerInput(size_t l) const { return l == 0 ? input : post[l - 1]; }
};

struct ForwardResult {
  Tensor2 output;
  ForwardCache cache;
};

absl::StatusOr<ForwardResult> ForwardAll(const Tensor2& input,
                                         std::span<const LayerParams> layers);

// Forward pass without retaining intermediates.
absl::StatusOr<Tensor2> Predict(const Tensor2& input, std::span<const LayerParams> layers);

size_t ParameterCount(std::span<const LayerParams> layers);

}  // namespace fedaudit::nn

#endif  // FEDAUDIT_NN_LAYER_H_
