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

#ifndef FEDAUDIT_DATA_ENCODING_H_
#define FEDAUDIT_DATA_ENCODING_H_

#include "absl/status/statusor.h"
#include "fedaudit/data/dataset.h"

namespace fedaudit::data {

// One-hot encodes every categorical attribute over its full observed
// vocabulary (first-occurrence order) and min-max scales every numeric
// attribute over all records: (x - min) / (max - min), or 0 for a constant
// column. Run after anomaly injection so injected tokens are encodable.
absl::StatusOr<EncodedDataset> Encode(const RawDataset& data, const DatasetSchema& schema);

// Recovers the categorical tokens of row `r` by argmax over each one-hot
// slice.
std::vector<std::string> DecodeCategorical(const EncodedDataset& encoded, size_t r);

}  // namespace fedaudit::data

#endif  // FEDAUDIT_DATA_ENCODING_H_
