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

#ifndef FEDAUDIT_AEN_SPLIT_H_
#define FEDAUDIT_AEN_SPLIT_H_

#include <cstddef>
#include <vector>

#include "absl/status/statusor.h"
#include "fedaudit/aen/model.h"

namespace fedaudit::aen {

// Cut layers for split learning. Encoder layers 1..cut_encoder and decoder
// layers 9 - cut_decoder..8 stay private; all others are public.
struct SplitMask {
  int cut_encoder = 0;
  int cut_decoder = 0;

  static SplitMask Symmetric(int cut) { return {cut, cut}; }

  friend bool operator==(const SplitMask&, const SplitMask&) = default;
};

absl::Status ValidateMask(const SplitMask& mask);

// True when layer `index` of the 16-layer chain is private under `mask`.
bool IsPrivateLayer(const SplitMask& mask, size_t index);

std::vector<size_t> PublicLayerIndices(const SplitMask& mask);
std::vector<size_t> PrivateLayerIndices(const SplitMask& mask);

// A subset of layers, each tagged with its position in the chain.
struct ParameterSubset {
  std::vector<size_t> indices;  // ascending
  std::vector<nn::LayerParams> layers;

  size_t ParameterCount() const { return nn::ParameterCount(layers); }

  friend bool operator==(const ParameterSubset&, const ParameterSubset&) = default;
};

struct SplitResult {
  ParameterSubset public_part;
  ParameterSubset private_part;
};

absl::StatusOr<SplitResult> SplitParams(const AenParams& params, const SplitMask& mask);

// Inverse of SplitParams. Fails when the subsets overlap, leave a layer
// uncovered, or disagree with `mask`.
absl::StatusOr<AenParams> MergeParams(const ParameterSubset& public_part,
                                      const ParameterSubset& private_part,
                                      const SplitMask& mask);

}  // namespace fedaudit::aen

#endif  // FEDAUDIT_AEN_SPLIT_H_
