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

#ifndef FEDAUDIT_DATA_ANOMALIES_H_
#define FEDAUDIT_DATA_ANOMALIES_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "fedaudit/data/dataset.h"

namespace fedaudit::data {

inline constexpr int kLocalAnomalyMaxTries = 1000;

// Appends `n_global` global and `n_local` local anomalies, labelled, after
// the existing records (globals first).
//
// Global: every categorical attribute takes a fresh token "ANOM_<attr>_<k>"
// absent from the data; numeric attributes are drawn uniformly from
// (max, 2 max] of the observed column (see NumericOutlierRange).
//
// Local: each categorical attribute is drawn independently from the most
// frequent quarter of its observed values; the full combination is redrawn
// until it does not occur in the original records (at most
// kLocalAnomalyMaxTries draws). Numeric values are copied from a random
// original record.
absl::StatusOr<RawDataset> InjectAnomalies(const RawDataset& data, size_t n_global,
                                           size_t n_local, uint64_t seed);

// Values of one attribute sorted by descending frequency (ties: first
// occurrence), truncated to ceil(distinct / 4), at least one.
std::vector<std::string> TopQuartileValues(const RawDataset& data, size_t attribute);

// Interval (lo, hi] that global anomalies sample numeric values from. For a
// positive observed maximum this is (max, 2 max]; otherwise the interval is
// shifted above the maximum by the column span (or 1 for constant columns).
std::pair<double, double> NumericOutlierRange(double observed_min, double observed_max);

}  // namespace fedaudit::data

#endif  // FEDAUDIT_DATA_ANOMALIES_H_
