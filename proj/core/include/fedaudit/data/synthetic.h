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

#ifndef FEDAUDIT_DATA_SYNTHETIC_H_
#define FEDAUDIT_DATA_SYNTHETIC_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "fedaudit/data/dataset.h"

namespace fedaudit::data {

// Generator for journal-entry-like tables used in tests, benchmarks and the
// desk-scale experiments. Records follow a small set of posting patterns:
// each pattern fixes a preferred value per categorical attribute and a
// log-normal amount; individual attributes deviate to a uniformly random
// value with probability `noise`.
struct SyntheticSpec {
  size_t records = 8000;
  // One categorical attribute per entry; the first is the department.
  std::vector<size_t> cardinalities = {10, 15, 20, 30, 40, 50};
  size_t patterns = 24;
  double noise = 0.05;
};

// Columns: "department", "attr_1" ... "attr_<M-1>", and numeric "amount".
DatasetSchema SyntheticSchema(const SyntheticSpec& spec);
RawDataset GenerateSynthetic(const SyntheticSpec& spec, uint64_t seed);

}  // namespace fedaudit::data

#endif  // FEDAUDIT_DATA_SYNTHETIC_H_
