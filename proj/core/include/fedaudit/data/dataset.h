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

#ifndef FEDAUDIT_DATA_DATASET_H_
#define FEDAUDIT_DATA_DATASET_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "fedaudit/nn/tensor.h"

namespace fedaudit::data {

// Column roles of a journal-entry table. Declared by configuration, never
// inferred from the file.
struct DatasetSchema {
  std::vector<std::string> categorical;
  std::vector<std::string> numeric;
  // Column holding the generating department; drives non-iid partitioning.
  std::string department;

  friend bool operator==(const DatasetSchema&, const DatasetSchema&) = default;
};

// Requires at least one categorical and one numeric attribute, unique names
// and a non-empty department column.
absl::Status ValidateSchema(const DatasetSchema& schema);

enum class Label : uint8_t { kNormal = 0, kGlobalAnomaly = 1, kLocalAnomaly = 2 };

std::string_view LabelName(Label label);
absl::StatusOr<Label> ParseLabel(std::string_view name);

struct Record {
  std::vector<std::string> categorical;  // schema.categorical order
  std::vector<double> numeric;           // schema.numeric order

  friend bool operator==(const Record&, const Record&) = default;
};

struct RawDataset {
  DatasetSchema schema;
  std::vector<Record> records;
  std::vector<Label> labels;
  std::vector<std::string> departments;

  size_t size() const { return records.size(); }
  size_t Count(Label label) const;
};

// Location of one attribute inside an encoded row.
struct ColumnSlice {
  std::string attribute;
  bool categorical = true;
  size_t offset = 0;
  size_t width = 0;

  friend bool operator==(const ColumnSlice&, const ColumnSlice&) = default;
};

struct EncodedDataset {
  nn::Tensor2 matrix;
  // Categorical slices in schema order, then one width-1 slice per numeric
  // attribute.
  std::vector<ColumnSlice> column_map;
  // Per categorical attribute: tokens in one-hot index order (first
  // occurrence order).
  std::vector<std::vector<std::string>> vocab;
  // Per numeric attribute: (min, max) used for scaling.
  std::vector<std::pair<double, double>> numeric_ranges;
  std::vector<Label> labels;

  size_t size() const { return matrix.rows(); }
  size_t input_dim() const { return matrix.cols(); }
};

enum class PartitionMode { kIid, kNonIid };

std::string_view PartitionModeName(PartitionMode mode);
absl::StatusOr<PartitionMode> ParsePartitionMode(std::string_view name);

struct PartitionPlan {
  size_t gamma = 1;
  PartitionMode mode = PartitionMode::kIid;
  // Partition index per record, in [0, gamma).
  std::vector<uint32_t> assignments;

  std::vector<size_t> Sizes() const;
  // Record indices of partition p in ascending order.
  std::vector<size_t> Members(size_t p) const;
};

}  // namespace fedaudit::data

#endif  // FEDAUDIT_DATA_DATASET_H_
