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

#ifndef FEDAUDIT_TESTS_ORACLES_AP_BRUTEFORCE_H_
#define FEDAUDIT_TESTS_ORACLES_AP_BRUTEFORCE_H_

#include <cstddef>
#include <vector>

// Quadratic average-precision oracle. Every record defines a threshold that
// admits itself and all records ahead of it (higher score, or equal score
// and lower index). Thresholds are visited by the number of records they
// admit, and precision/recall are recounted from scratch at each.
namespace fedaudit::testing {

inline double BruteForceAveragePrecision(const std::vector<double>& scores,
                                         const std::vector<bool>& positives) {
  const size_t n = scores.size();
  size_t total_pos = 0;
  for (bool p : positives) total_pos += p ? 1 : 0;
  auto ahead_or_same = [&](size_t k, size_t j) {
    return scores[k] > scores[j] || (scores[k] == scores[j] && k <= j);
  };
  // admitted[j] = records admitted when record j is the cut-off.
  std::vector<std::vector<size_t>> by_size(n + 1);
  for (size_t j = 0; j < n; ++j) {
    size_t admitted = 0;
    for (size_t k = 0; k < n; ++k) admitted += ahead_or_same(k, j) ? 1 : 0;
    by_size[admitted].push_back(j);
  }
  double ap = 0.0;
  double prev_recall = 0.0;
  for (size_t size = 1; size <= n; ++size) {
    for (size_t j : by_size[size]) {
      size_t tp = 0;
      size_t fp = 0;
      for (size_t k = 0; k < n; ++k) {
        if (!ahead_or_same(k, j)) continue;
        if (positives[k]) {
          ++tp;
        } else {
          ++fp;
        }
      }
      const double precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
      const double recall = static_cast<double>(tp) / static_cast<double>(total_pos);
      ap += (recall - prev_recall) * precision;
      prev_recall = recall;
    }
  }
  return ap;
}

}  // namespace fedaudit::testing

#endif  // FEDAUDIT_TESTS_ORACLES_AP_BRUTEFORCE_H_
