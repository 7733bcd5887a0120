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

#ifndef FEDAUDIT_AEN_MODEL_H_
#define FEDAUDIT_AEN_MODEL_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "fedaudit/nn/layer.h"

namespace fedaudit::aen {

// Layers per side of the network.
inline constexpr size_t kSideDepth = 8;
inline constexpr size_t kTotalDepth = 2 * kSideDepth;
inline constexpr double kLeakySlope = 0.4;

// Encoder output widths for layers 1..8; the decoder mirrors them.
inline constexpr std::array<size_t, kSideDepth> kEncoderWidths = {128, 64, 32, 16,
                                                                  8,   4,  2,  2};

// Encoder and decoder stored as one 16-layer chain so that training can run a
// single forward/backward pass: layers [0, 8) encode, [8, 16) decode.
struct AenParams {
  std::vector<nn::LayerParams> layers;

  std::span<const nn::LayerParams> encoder() const {
    return std::span(layers).first(kSideDepth);
  }
  std::span<const nn::LayerParams> decoder() const {
    return std::span(layers).last(kSideDepth);
  }
  size_t input_dim() const { return layers.empty() ? 0 : layers.front().in_dim(); }

  friend bool operator==(const AenParams&, const AenParams&) = default;
};

absl::StatusOr<AenParams> BuildAen(size_t input_dim, uint64_t seed);

// Checks depth, chaining, widths and activations against the fixed layout.
absl::Status ValidateAen(const AenParams& params);

size_t ParameterCount(const AenParams& params);

// Bottleneck codes (encoder output) for every row of `input`.
absl::StatusOr<nn::Tensor2> LatentCodes(const nn::Tensor2& input, const AenParams& params);

}  // namespace fedaudit::aen

#endif  // FEDAUDIT_AEN_MODEL_H_
