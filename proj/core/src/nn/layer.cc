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

#include "fedaudit/nn/layer.h"

#include <cmath>
#include <utility>

#include "absl/strings/str_format.h"
#include "fedaudit/errors.h"
#include "nn/kernels.h"
#include "fedaudit/status_macros.h"

namespace fedaudit::nn {

double Activation::Apply(double z) const {
  switch (kind) {
    case Kind::kLeakyRelu:
      return z >= 0.0 ? z : alpha * z;
    case Kind::kTanh:
      return std::tanh(z);
  }
  return z;
}

double Activation::Derivative(double z) const {
  switch (kind) {
    case Kind::kLeakyRelu:
      return z >= 0.0 ? 1.0 : alpha;
    case Kind::kTanh: {
      const double t = std::tanh(z);
      return 1.0 - t * t;
    }
  }
  return 1.0;
}

LayerParams InitLayer(size_t in_dim, size_t out_dim, Activation activation, Rng& rng) {
  LayerParams layer;
  layer.weights = Tensor2(out_dim, in_dim);
  layer.bias.assign(out_dim, 0.0);
  layer.activation = activation;
  const double bound = 1.0 / std::sqrt(static_cast<double>(in_dim));
  for (double& w : layer.weights.values()) w = rng.Uniform(-bound, bound);
  return layer;
}

absl::Status ValidateLayer(const LayerParams& layer) {
  if (layer.bias.size() != layer.weights.rows()) {
    return ShapeError(absl::StrFormat("bias length %d != weight rows %d",
                                      layer.bias.size(), layer.weights.rows()));
  }
  if (layer.activation.kind == Activation::Kind::kLeakyRelu &&
      !(layer.activation.alpha > 0.0)) {
    return ConfigError("LeakyRelu alpha must be > 0");
  }
  return absl::OkStatus();
}

absl::Status ValidateChain(std::span<const LayerParams> layers) {
  for (size_t l = 0; l < layers.size(); ++l) {
    FEDAUDIT_RETURN_IF_ERROR(ValidateLayer(layers[l]));
    if (l > 0 && layers[l - 1].out_dim() != layers[l].in_dim()) {
      return ShapeError(absl::StrFormat("layer %d expects %d inputs but layer %d emits %d",
                                        l, layers[l].in_dim(), l - 1,
                                        layers[l - 1].out_dim()));
    }
  }
  return absl::OkStatus();
}

namespace {

// z = W x + b for every row, then the activation. Each output element is a
// function of its own input row only, so results do not depend on how many
// rows are processed together.
void AffineActivate(const Tensor2& input, const LayerParams& layer, Tensor2* pre,
                    Tensor2* post) {
  const size_t out = layer.out_dim();
  const size_t in = layer.in_dim();
  std::vector<size_t> nonzero;
  nonzero.reserve(in);
  for (size_t b = 0; b < input.rows(); ++b) {
    const auto x = input.row(b);
    nonzero.clear();
    for (size_t i = 0; i < in; ++i) {
      if (x[i] != 0.0) nonzero.push_back(i);
    }
    const bool sparse = nonzero.size() * 4 < in;
    auto z = pre->row(b);
    for (size_t o = 0; o < out; ++o) {
      const auto w = layer.weights.row(o);
      const double dot = sparse ? SparseDot(w, x, nonzero) : Dot(w, x);
      z[o] = dot + layer.bias[o];
    }
    auto a = post->row(b);
    for (size_t o = 0; o < out; ++o) a[o] = layer.activation.Apply(z[o]);
  }
}

}  // namespace

absl::StatusOr<Tensor2> DenseForward(const Tensor2& input, const LayerParams& layer) {
  FEDAUDIT_RETURN_IF_ERROR(ValidateLayer(layer));
  if (input.cols() != layer.in_dim()) {
    return ShapeError(absl::StrFormat("input has %d columns, layer expects %d",
                                      input.cols(), layer.in_dim()));
  }
  Tensor2 pre(input.rows(), layer.out_dim());
  Tensor2 post(input.rows(), layer.out_dim());
  AffineActivate(input, layer, &pre, &post);
  return post;
}

absl::StatusOr<ForwardResult> ForwardAll(const Tensor2& input,
                                         std::span<const LayerParams> layers) {
  FEDAUDIT_RETURN_IF_ERROR(ValidateChain(layers));
  if (!layers.empty() && input.cols() != layers.front().in_dim()) {
    return ShapeError(absl::StrFormat("input has %d columns, network expects %d",
                                      input.cols(), layers.front().in_dim()));
  }
  ForwardResult result;
  result.cache.input = input;
  result.cache.pre.reserve(layers.size());
  result.cache.post.reserve(layers.size());
  for (size_t l = 0; l < layers.size(); ++l) {
    const Tensor2& x = result.cache.LayerInput(l);
    Tensor2 pre(x.rows(), layers[l].out_dim());
    Tensor2 post(x.rows(), layers[l].out_dim());
    AffineActivate(x, layers[l], &pre, &post);
    result.cache.pre.push_back(std::move(pre));
    result.cache.post.push_back(std::move(post));
  }
  result.output = layers.empty() ? input : result.cache.post.back();
  return result;
}

absl::StatusOr<Tensor2> Predict(const Tensor2& input, std::span<const LayerParams> layers) {
  FEDAUDIT_RETURN_IF_ERROR(ValidateChain(layers));
  if (!layers.empty() && input.cols() != layers.front().in_dim()) {
    return ShapeError(absl::StrFormat("input has %d columns, network expects %d",
                                      input.cols(), layers.front().in_dim()));
  }
  Tensor2 x = input;
  for (const LayerParams& layer : layers) {
    Tensor2 pre(x.rows(), layer.out_dim());
    Tensor2 post(x.rows(), layer.out_dim());
    AffineActivate(x, layer, &pre, &post);
    x = std::move(post);
  }
  return x;
}

size_t ParameterCount(std::span<const LayerParams> layers) {
  size_t n = 0;
  for (const LayerParams& l : layers) n += l.ParameterCount();
  return n;
}

}  // namespace fedaudit::nn
