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

#include "fedaudit/aen/model.h"

#include "absl/strings/str_cat.h"
#include "fedaudit/errors.h"
#include "fedaudit/status_macros.h"

namespace fedaudit::aen {
namespace {

nn::Activation EncoderActivation(size_t l) {
  return l + 1 == kSideDepth ? nn::Activation::Tanh() : nn::Activation::LeakyRelu(kLeakySlope);
}

nn::Activation DecoderActivation(size_t l) {
  return l + 1 == kSideDepth ? nn::Activation::Tanh() : nn::Activation::LeakyRelu(kLeakySlope);
}

// (in, out) of every layer of the 16-layer chain.
std::vector<std::pair<size_t, size_t>> ChainDims(size_t input_dim) {
  std::vector<std::pair<size_t, size_t>> dims;
  size_t in = input_dim;
  for (size_t w : kEncoderWidths) {
    dims.emplace_back(in, w);
    in = w;
  }
  for (size_t l = 0; l < kSideDepth; ++l) {
    const size_t out = l + 1 == kSideDepth ? input_dim : kEncoderWidths[kSideDepth - 2 - l];
    dims.emplace_back(in, out);
    in = out;
  }
  return dims;
}

nn::Activation ChainActivation(size_t l) {
  return l < kSideDepth ? EncoderActivation(l) : DecoderActivation(l - kSideDepth);
}

}  // namespace

absl::StatusOr<AenParams> BuildAen(size_t input_dim, uint64_t seed) {
  if (input_dim < 2) {
    return ConfigError(absl::StrCat("input_dim must be >= 2, got ", input_dim));
  }
  nn::Rng rng(seed);
  AenParams params;
  const auto dims = ChainDims(input_dim);
  for (size_t l = 0; l < dims.size(); ++l) {
    params.layers.push_back(nn::InitLayer(dims[l].first, dims[l].second, ChainActivation(l), rng));
  }
  return params;
}

absl::Status ValidateAen(const AenParams& params) {
  if (params.layers.size() != kTotalDepth) {
    return ConfigError(absl::StrCat("expected ", kTotalDepth, " layers, got ", params.layers.size()));
  }
  FEDAUDIT_RETURN_IF_ERROR(nn::ValidateChain(params.layers));
  const auto dims = ChainDims(params.input_dim());
  for (size_t l = 0; l < kTotalDepth; ++l) {
    const nn::LayerParams& layer = params.layers[l];
    if (layer.in_dim() != dims[l].first || layer.out_dim() != dims[l].second) {
      return ShapeError(absl::StrCat("layer ", l, " is ", layer.out_dim(), "x", layer.in_dim(),
                                     ", expected ", dims[l].second, "x", dims[l].first));
    }
    if (!(layer.activation == ChainActivation(l))) {
      return ConfigError(absl::StrCat("layer ", l, " has the wrong activation"));
    }
  }
  return absl::OkStatus();
}

size_t ParameterCount(const AenParams& params) { return nn::ParameterCount(params.layers); }

absl::StatusOr<nn::Tensor2> LatentCodes(const nn::Tensor2& input, const AenParams& params) {
  FEDAUDIT_RETURN_IF_ERROR(ValidateAen(params));
  return nn::Predict(input, params.encoder());
}

}  // namespace fedaudit::aen
