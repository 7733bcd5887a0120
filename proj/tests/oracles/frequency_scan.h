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

#ifndef FEDAUDIT_TESTS_ORACLES_FREQUENCY_SCAN_H_
#define FEDAUDIT_TESTS_ORACLES_FREQUENCY_SCAN_H_

#include <map>
#include <string>
#include <vector>

#include "fedaudit/data/dataset.h"

// Brute-force label recovery that looks only at record values, never at the
// labels: a record is flagged when every categorical value it carries occurs
// exactly once in the whole dataset.
namespace fedaudit::testing {

inline std::vector<std::map<std::string, size_t>> ValueFrequencies(
    const data::RawDataset& d) {
  std::vector<std::map<std::string, size_t>> freq(d.schema.categorical.size());
  for (const auto& rec : d.records) {
    for (size_t a = 0; a < rec.categorical.size(); ++a) ++freq[a][rec.categorical[a]];
  }
  return freq;
}

inline std::vector<bool> AllValuesUnique(const data::RawDataset& d) {
  const auto freq = ValueFrequencies(d);
  std::vector<bool> flagged(d.size(), false);
  for (size_t r = 0; r < d.size(); ++r) {
    bool all_unique = true;
    for (size_t a = 0; a < freq.size(); ++a) {
      if (freq[a].at(d.records[r].categorical[a]) != 1) {
        all_unique = false;
        break;
      }
    }
    flagged[r] = all_unique;
  }
  return flagged;
}

}  // namespace fedaudit::testing

#endif  // FEDAUDIT_TESTS_ORACLES_FREQUENCY_SCAN_H_
