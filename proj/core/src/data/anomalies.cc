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

#include "fedaudit/data/anomalies.h"

#include <algorithm>
#include <limits>
#include <unordered_map>
#include <unordered_set>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "fedaudit/errors.h"
#include "fedaudit/nn/rng.h"

namespace fedaudit::data {
namespace {

std::string CombinationKey(const std::vector<std::string>& values) {
  std::string key;
  for (const auto& v : values) {
    key.append(v);
    key.push_back('\x1f');
  }
  return key;
}

}  // namespace

std::vector<std::string> TopQuartileValues(const RawDataset& data, size_t attribute) {
  std::unordered_map<std::string, size_t> count;
  std::vector<std::string> order;
  for (const auto& rec : data.records) {
    const std::string& v = rec.categorical[attribute];
    if (count[v]++ == 0) order.push_back(v);
  }
  std::stable_sort(order.begin(), order.end(), [&](const std::string& a, const std::string& b) {
    return count[a] > count[b];
  });
  const size_t keep = std::max<size_t>(1, (order.size() + 3) / 4);
  order.resize(std::min(keep, order.size()));
  return order;
}

std::pair<double, double> NumericOutlierRange(double observed_min, double observed_max) {
  if (observed_max > 0.0) return {observed_max, 2.0 * observed_max};
  double span = observed_max - observed_min;
  if (!(span > 0.0)) span = 1.0;
  return {observed_max, observed_max + span};
}

absl::StatusOr<RawDataset> InjectAnomalies(const RawDataset& data, size_t n_global,
                                           size_t n_local, uint64_t seed) {
  if (n_global == 0 && n_local == 0) return data;
  if (data.size() == 0) return DataError("cannot inject anomalies into an empty dataset");

  const DatasetSchema& schema = data.schema;
  const size_t m = schema.categorical.size();
  const size_t k = schema.numeric.size();
  const auto dept_it =
      std::find(schema.categorical.begin(), schema.categorical.end(), schema.department);
  const bool dept_is_cat = dept_it != schema.categorical.end();
  const size_t dept_attr = static_cast<size_t>(dept_it - schema.categorical.begin());

  nn::Rng rng(nn::DeriveSeed(seed, {0xA11045ULL}));
  RawDataset out = data;
  out.records.reserve(data.size() + n_global + n_local);

  std::vector<double> lo(k, std::numeric_limits<double>::infinity());
  std::vector<double> hi(k, -std::numeric_limits<double>::infinity());
  for (const auto& rec : data.records) {
    for (size_t j = 0; j < k; ++j) {
      lo[j] = std::min(lo[j], rec.numeric[j]);
      hi[j] = std::max(hi[j], rec.numeric[j]);
    }
  }

  std::vector<std::unordered_set<std::string>> vocab(m);
  for (const auto& rec : data.records) {
    for (size_t a = 0; a < m; ++a) vocab[a].insert(rec.categorical[a]);
  }

  for (size_t g = 0; g < n_global; ++g) {
    Record rec;
    for (size_t a = 0; a < m; ++a) {
      std::string token = absl::StrCat("ANOM_", schema.categorical[a], "_", g);
      for (int bump = 1; vocab[a].contains(token); ++bump) {
        token = absl::StrCat("ANOM_", schema.categorical[a], "_", g, "_", bump);
      }
      vocab[a].insert(token);
      rec.categorical.push_back(std::move(token));
    }
    for (size_t j = 0; j < k; ++j) {
      const auto [low, high] = NumericOutlierRange(lo[j], hi[j]);
      rec.numeric.push_back(low + (high - low) * rng.UniformOpenLeft());
    }
    const size_t donor = rng.UniformIndex(data.size());
    out.departments.push_back(dept_is_cat ? rec.categorical[dept_attr]
                                          : data.departments[donor]);
    out.records.push_back(std::move(rec));
    out.labels.push_back(Label::kGlobalAnomaly);
  }

  if (n_local > 0) {
    std::unordered_set<std::string> seen;
    seen.reserve(data.size() * 2);
    for (const auto& rec : data.records) seen.insert(CombinationKey(rec.categorical));
    std::vector<std::vector<std::string>> frequent(m);
    for (size_t a = 0; a < m; ++a) frequent[a] = TopQuartileValues(data, a);

    for (size_t l = 0; l < n_local; ++l) {
      Record rec;
      bool found = false;
      for (int attempt = 0; attempt < kLocalAnomalyMaxTries && !found; ++attempt) {
        rec.categorical.clear();
        for (size_t a = 0; a < m; ++a) {
          rec.categorical.push_back(frequent[a][rng.UniformIndex(frequent[a].size())]);
        }
        found = !seen.contains(CombinationKey(rec.categorical));
      }
      if (!found) {
        return DataError(absl::StrFormat(
            "injection error: no unseen combination of frequent values after %d tries "
            "(local anomaly %d); dataset too dense",
            kLocalAnomalyMaxTries, l));
      }
      const size_t donor = rng.UniformIndex(data.size());
      rec.numeric = data.records[donor].numeric;
      out.departments.push_back(dept_is_cat ? rec.categorical[dept_attr]
                                            : data.departments[donor]);
      out.records.push_back(std::move(rec));
      out.labels.push_back(Label::kLocalAnomaly);
    }
  }
  return out;
}

}  // namespace fedaudit::data
