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

#include "fedaudit/data/synthetic.h"

#include <cmath>

#include "absl/strings/str_format.h"
#include "fedaudit/nn/rng.h"

namespace fedaudit::data {

DatasetSchema SyntheticSchema(const SyntheticSpec& spec) {
  DatasetSchema schema;
  for (size_t a = 0; a < spec.cardinalities.size(); ++a) {
    schema.categorical.push_back(a == 0 ? "department" : absl::StrFormat("attr_%d", a));
  }
  schema.numeric = {"amount"};
  schema.department = "department";
  return schema;
}

RawDataset GenerateSynthetic(const SyntheticSpec& spec, uint64_t seed) {
  nn::Rng rng(nn::DeriveSeed(seed, {0x5E17ULL}));
  const size_t m = spec.cardinalities.size();

  struct Pattern {
    std::vector<size_t> values;
    double log_mean;
  };
  std::vector<Pattern> patterns(spec.patterns);
  std::vector<double> cumulative(spec.patterns);
  double total = 0.0;
  for (size_t p = 0; p < spec.patterns; ++p) {
    for (size_t a = 0; a < m; ++a) {
      patterns[p].values.push_back(rng.UniformIndex(spec.cardinalities[a]));
    }
    patterns[p].log_mean = rng.Uniform(3.0, 8.0);
    total += 1.0 / std::pow(static_cast<double>(p + 1), 0.7);
    cumulative[p] = total;
  }

  RawDataset data;
  data.schema = SyntheticSchema(spec);
  data.records.reserve(spec.records);
  for (size_t r = 0; r < spec.records; ++r) {
    const double u = rng.Uniform() * total;
    size_t p = 0;
    while (p + 1 < spec.patterns && cumulative[p] <= u) ++p;
    Record rec;
    for (size_t a = 0; a < m; ++a) {
      size_t v = patterns[p].values[a];
      if (rng.Uniform() < spec.noise) v = rng.UniformIndex(spec.cardinalities[a]);
      rec.categorical.push_back(absl::StrFormat("%s_%02d", data.schema.categorical[a], v));
    }
    const double amount = std::exp(patterns[p].log_mean + 0.3 * rng.Gaussian());
    rec.numeric.push_back(std::round(amount * 100.0) / 100.0);
    data.departments.push_back(rec.categorical[0]);
    data.records.push_back(std::move(rec));
  }
  data.labels.assign(data.records.size(), Label::kNormal);
  return data;
}

}  // namespace fedaudit::data
