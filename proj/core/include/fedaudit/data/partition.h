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

#ifndef FEDAUDIT_DATA_PARTITION_H_
#define FEDAUDIT_DATA_PARTITION_H_

#include <cstdint>

#include "absl/status/statusor.h"
#include "fedaudit/data/dataset.h"
#include "fedaudit/nn/tensor.h"

namespace fedaudit::data {

// Assigns every record to one of `gamma` partitions.
//
// kIid: each normal record independently and uniformly at random.
// kNonIid: departments (of normal records) sorted by record count
//   descending, ties by first occurrence, each placed whole into the
//   currently smallest partition (ties: lowest index).
//
// Anomalous records always go to partition 0, where evaluation happens.
// Fails if any partition ends up empty or, for kNonIid, if there are fewer
// departments than partitions.
absl::StatusOr<PartitionPlan> Partition(const RawDataset& data, PartitionMode mode,
                                        size_t gamma, uint64_t seed);

// Rows of partition p, in record order.
nn::Tensor2 PartitionMatrix(const EncodedDataset& data, const PartitionPlan& plan, size_t p);
std::vector<Label> PartitionLabels(const EncodedDataset& data, const PartitionPlan& plan,
                                   size_t p);

}  // namespace fedaudit::data

#endif  // FEDAUDIT_DATA_PARTITION_H_
