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

#ifndef FEDAUDIT_AEN_CHECKPOINT_H_
#define FEDAUDIT_AEN_CHECKPOINT_H_

#include <cstdint>
#include <string>

#include "absl/status/statusor.h"
#include "fedaudit/aen/model.h"
#include "fedaudit/aen/split.h"

namespace fedaudit::aen {

inline constexpr int kCheckpointFormatVersion = 1;

struct Checkpoint {
  AenParams params;
  SplitMask mask;
  uint64_t seed = 0;
  // Digest of the experiment configuration that produced the model.
  std::string config_digest;
};

// Writes `<dir>/model.json` (layer dims, activations, mask, seed) and
// `<dir>/params.bin` (all layer weights then biases, in chain order, as
// little-endian doubles).
absl::Status SaveCheckpoint(const Checkpoint& checkpoint, const std::string& dir);
absl::StatusOr<Checkpoint> LoadCheckpoint(const std::string& dir);

}  // namespace fedaudit::aen

#endif  // FEDAUDIT_AEN_CHECKPOINT_H_
