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

#ifndef FEDAUDIT_DATA_PERSISTENCE_H_
#define FEDAUDIT_DATA_PERSISTENCE_H_

#include <string>

#include "absl/status/statusor.h"
#include "fedaudit/data/dataset.h"
#include "fedaudit/nn/tensor.h"

namespace fedaudit::data {

inline constexpr int kPreparedFormatVersion = 1;
inline constexpr char kManifestFile[] = "manifest.json";
inline constexpr char kMatrixFile[] = "matrix.bin";

struct PreparedDataset {
  DatasetSchema schema;
  EncodedDataset encoded;
  PartitionPlan plan;
  // Digest of the configuration that produced the files.
  std::string config_digest;
};

// Matrix file layout: rows (u64), cols (u64), then rows*cols doubles, all
// little-endian, row-major.
absl::Status WriteMatrix(const nn::Tensor2& matrix, const std::string& path);
absl::StatusOr<nn::Tensor2> ReadMatrix(const std::string& path);

// Writes <dir>/manifest.json (schema, vocabulary, numeric ranges, column map,
// labels, partition assignments) and <dir>/matrix.bin. Output bytes depend
// only on the inputs.
absl::Status SavePrepared(const PreparedDataset& prepared, const std::string& dir);
absl::StatusOr<PreparedDataset> LoadPrepared(const std::string& dir);

}  // namespace fedaudit::data

#endif  // FEDAUDIT_DATA_PERSISTENCE_H_
