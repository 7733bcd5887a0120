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

#include "fedaudit/data/encoding.h"

#include <algorithm>
#include <limits>
#include <unordered_map>

#include "fedaudit/errors.h"
#include "fedaudit/status_macros.h"

namespace fedaudit::data {

absl::StatusOr<EncodedDataset> Encode(const RawDataset& data, const DatasetSchema& schema) {
  FEDAUDIT_RETURN_IF_ERROR(ValidateSchema(schema));
  if (!(data.schema == schema)) return DataError("schema error: dataset schema differs");
  const size_t m = schema.categorical.size();
  const size_t k = schema.numeric.size();
  for (size_t r = 0; r < data.size(); ++r) {
    if (data.records[r].categorical.size() != m || data.records[r].numeric.size() != k) {
      return DataError("schema error: record arity does not match schema");
    }
  }

  EncodedDataset out;
  out.vocab.resize(m);
  std::vector<std::unordered_map<std::string, size_t>> index(m);
  for (const auto& rec : data.records) {
    for (size_t a = 0; a < m; ++a) {
      auto [it, inserted] = index[a].emplace(rec.categorical[a], out.vocab[a].size());
      if (inserted) out.vocab[a].push_back(rec.categorical[a]);
    }
  }

  size_t offset = 0;
  for (size_t a = 0; a < m; ++a) {
    out.column_map.push_back({schema.categorical[a], true, offset, out.vocab[a].size()});
    offset += out.vocab[a].size();
  }
  for (size_t j = 0; j < k; ++j) {
    out.column_map.push_back({schema.numeric[j], false, offset, 1});
    ++offset;
  }

  out.numeric_ranges.assign(k, {std::numeric_limits<double>::infinity(),
                                -std::numeric_limits<double>::infinity()});
  for (const auto& rec : data.records) {
    for (size_t j = 0; j < k; ++j) {
      out.numeric_ranges[j].first = std::min(out.numeric_ranges[j].first, rec.numeric[j]);
      out.numeric_ranges[j].second = std::max(out.numeric_ranges[j].second, rec.numeric[j]);
    }
  }

  out.matrix = nn::Tensor2(data.size(), offset);
  for (size_t r = 0; r < data.size(); ++r) {
    auto row = out.matrix.row(r);
    const Record& rec = data.records[r];
    for (size_t a = 0; a < m; ++a) {
      row[out.column_map[a].offset + index[a].at(rec.categorical[a])] = 1.0;
    }
    for (size_t j = 0; j < k; ++j) {
      const auto [lo, hi] = out.numeric_ranges[j];
      const double span = hi - lo;
      row[out.column_map[m + j].offset] = span > 0.0 ? (rec.numeric[j] - lo) / span : 0.0;
    }
  }
  out.labels = data.labels;
  return out;
}

std::vector<std::string> DecodeCategorical(const EncodedDataset& encoded, size_t r) {
  std::vector<std::string> tokens;
  const auto row = encoded.matrix.row(r);
  for (size_t a = 0; a < encoded.vocab.size(); ++a) {
    const ColumnSlice& slice = encoded.column_map[a];
    const auto begin = row.begin() + static_cast<std::ptrdiff_t>(slice.offset);
    const auto best = std::max_element(begin, begin + static_cast<std::ptrdiff_t>(slice.width));
    tokens.push_back(encoded.vocab[a][static_cast<size_t>(best - begin)]);
  }
  return tokens;
}

}  // namespace fedaudit::data
