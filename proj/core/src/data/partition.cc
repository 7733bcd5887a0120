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

#include "fedaudit/data/partition.h"

#include <algorithm>
#include <unordered_map>

#include "absl/strings/str_format.h"
#include "fedaudit/errors.h"
#include "fedaudit/nn/rng.h"

namespace fedaudit::data {

absl::StatusOr<PartitionPlan> Partition(const RawDataset& data, PartitionMode mode,
                                        size_t gamma, uint64_t seed) {
  if (gamma < 1) return ConfigError("gamma must be >= 1");
  PartitionPlan plan;
  plan.gamma = gamma;
  plan.mode = mode;
  plan.assignments.assign(data.size(), 0);

  if (mode == PartitionMode::kIid) {
    nn::Rng rng(nn::DeriveSeed(seed, {0x9A27ULL}));
    for (size_t r = 0; r < data.size(); ++r) {
      if (data.labels[r] == Label::kNormal) {
        plan.assignments[r] = static_cast<uint32_t>(rng.UniformIndex(gamma));
      }
    }
  } else {
    std::unordered_map<std::string, size_t> dept_index;
    std::vector<std::string> depts;
    std::vector<size_t> counts;
    for (size_t r = 0; r < data.size(); ++r) {
      if (data.labels[r] != Label::kNormal) continue;
      auto [it, inserted] = dept_index.emplace(data.departments[r], depts.size());
      if (inserted) {
        depts.push_back(data.departments[r]);
        counts.push_back(0);
      }
      ++counts[it->second];
    }
    if (depts.size() < gamma) {
      return FederationError(absl::StrFormat(
          "partition error: non-iid partitioning needs >= %d departments, found %d", gamma,
          depts.size()));
    }
    std::vector<size_t> order(depts.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](size_t a, size_t b) { return counts[a] > counts[b]; });
    std::vector<size_t> load(gamma, 0);
    std::vector<uint32_t> dept_partition(depts.size(), 0);
    for (size_t d : order) {
      const size_t target =
          static_cast<size_t>(std::min_element(load.begin(), load.end()) - load.begin());
      dept_partition[d] = static_cast<uint32_t>(target);
      load[target] += counts[d];
    }
    for (size_t r = 0; r < data.size(); ++r) {
      if (data.labels[r] == Label::kNormal) {
        plan.assignments[r] = dept_partition[dept_index.at(data.departments[r])];
      }
    }
  }

  const auto sizes = plan.Sizes();
  for (size_t p = 0; p < gamma; ++p) {
    if (sizes[p] == 0) {
      return FederationError(absl::StrFormat("partition error: partition %d is empty", p));
    }
  }
  return plan;
}

nn::Tensor2 PartitionMatrix(const EncodedDataset& data, const PartitionPlan& plan, size_t p) {
  const auto members = plan.Members(p);
  return data.matrix.GatherRows(members);
}

std::vector<Label> PartitionLabels(const EncodedDataset& data, const PartitionPlan& plan,
                                   size_t p) {
  std::vector<Label> out;
  for (size_t r : plan.Members(p)) out.push_back(data.labels[r]);
  return out;
}

}  // namespace fedaudit::data
