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

#include "fedaudit/aen/split.h"

#include <optional>

#include "absl/strings/str_cat.h"
#include "fedaudit/errors.h"
#include "fedaudit/status_macros.h"

namespace fedaudit::aen {

absl::Status ValidateMask(const SplitMask& mask) {
  const int depth = static_cast<int>(kSideDepth);
  if (mask.cut_encoder < 0 || mask.cut_encoder > depth || mask.cut_decoder < 0 ||
      mask.cut_decoder > depth) {
    return ConfigError(absl::StrCat("cut layers must lie in [0, ", depth, "], got (",
                                    mask.cut_encoder, ", ", mask.cut_decoder, ")"));
  }
  return absl::OkStatus();
}

bool IsPrivateLayer(const SplitMask& mask, size_t index) {
  const int depth = static_cast<int>(kSideDepth);
  if (index < kSideDepth) return static_cast<int>(index) + 1 <= mask.cut_encoder;
  const int decoder_layer = static_cast<int>(index - kSideDepth) + 1;
  return decoder_layer > depth - mask.cut_decoder;
}

std::vector<size_t> PublicLayerIndices(const SplitMask& mask) {
  std::vector<size_t> out;
  for (size_t l = 0; l < kTotalDepth; ++l) {
    if (!IsPrivateLayer(mask, l)) out.push_back(l);
  }
  return out;
}

std::vector<size_t> PrivateLayerIndices(const SplitMask& mask) {
  std::vector<size_t> out;
  for (size_t l = 0; l < kTotalDepth; ++l) {
    if (IsPrivateLayer(mask, l)) out.push_back(l);
  }
  return out;
}

absl::StatusOr<SplitResult> SplitParams(const AenParams& params, const SplitMask& mask) {
  FEDAUDIT_RETURN_IF_ERROR(ValidateMask(mask));
  if (params.layers.size() != kTotalDepth) {
    return ConfigError(absl::StrCat("expected ", kTotalDepth, " layers, got ", params.layers.size()));
  }
  SplitResult out;
  for (size_t l = 0; l < kTotalDepth; ++l) {
    ParameterSubset& part = IsPrivateLayer(mask, l) ? out.private_part : out.public_part;
    part.indices.push_back(l);
    part.layers.push_back(params.layers[l]);
  }
  return out;
}

absl::StatusOr<AenParams> MergeParams(const ParameterSubset& public_part,
                                      const ParameterSubset& private_part,
                                      const SplitMask& mask) {
  FEDAUDIT_RETURN_IF_ERROR(ValidateMask(mask));
  std::vector<std::optional<nn::LayerParams>> slots(kTotalDepth);
  for (const ParameterSubset* part : {&public_part, &private_part}) {
    if (part->indices.size() != part->layers.size()) {
      return FederationError("partition error: subset indices and layers differ in length");
    }
    const bool is_private = part == &private_part;
    for (size_t i = 0; i < part->indices.size(); ++i) {
      const size_t l = part->indices[i];
      if (l >= kTotalDepth) {
        return FederationError(absl::StrCat("partition error: layer index ", l, " out of range"));
      }
      if (slots[l].has_value()) {
        return FederationError(absl::StrCat("partition error: layer ", l, " supplied twice"));
      }
      if (IsPrivateLayer(mask, l) != is_private) {
        return FederationError(absl::StrCat("partition error: layer ", l, " is ",
                                            is_private ? "public" : "private",
                                            " under the mask"));
      }
      slots[l] = part->layers[i];
    }
  }
  AenParams params;
  params.layers.reserve(kTotalDepth);
  for (size_t l = 0; l < kTotalDepth; ++l) {
    if (!slots[l].has_value()) {
      return FederationError(absl::StrCat("partition error: layer ", l, " missing"));
    }
    params.layers.push_back(std::move(*slots[l]));
  }
  return params;
}

}  // namespace fedaudit::aen
