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

#include "fedaudit/data/dataset.h"

#include <algorithm>
#include <set>

#include "absl/strings/str_cat.h"
#include "fedaudit/errors.h"

namespace fedaudit::data {

absl::Status ValidateSchema(const DatasetSchema& schema) {
  if (schema.categorical.empty()) {
    return ConfigError("schema needs at least one categorical attribute");
  }
  if (schema.numeric.empty()) {
    return ConfigError("schema needs at least one numeric attribute");
  }
  if (schema.department.empty()) return ConfigError("schema needs a department column");
  std::set<std::string> seen;
  for (const auto* list : {&schema.categorical, &schema.numeric}) {
    for (const std::string& name : *list) {
      if (name.empty()) return ConfigError("empty attribute name");
      if (!seen.insert(name).second) {
        return ConfigError(absl::StrCat("duplicate attribute '", name, "'"));
      }
    }
  }
  return absl::OkStatus();
}

std::string_view LabelName(Label label) {
  switch (label) {
    case Label::kNormal:
      return "normal";
    case Label::kGlobalAnomaly:
      return "global";
    case Label::kLocalAnomaly:
      return "local";
  }
  return "normal";
}

absl::StatusOr<Label> ParseLabel(std::string_view name) {
  for (Label l : {Label::kNormal, Label::kGlobalAnomaly, Label::kLocalAnomaly}) {
    if (LabelName(l) == name) return l;
  }
  return DataError(absl::StrCat("unknown label '", std::string(name), "'"));
}

size_t RawDataset::Count(Label label) const {
  return static_cast<size_t>(std::count(labels.begin(), labels.end(), label));
}

std::string_view PartitionModeName(PartitionMode mode) {
  return mode == PartitionMode::kIid ? "iid" : "noniid";
}

absl::StatusOr<PartitionMode> ParsePartitionMode(std::string_view name) {
  if (name == "iid") return PartitionMode::kIid;
  if (name == "noniid" || name == "non-iid") return PartitionMode::kNonIid;
  return ConfigError(absl::StrCat("unknown partition mode '", std::string(name), "'"));
}

std::vector<size_t> PartitionPlan::Sizes() const {
  std::vector<size_t> sizes(gamma, 0);
  for (uint32_t a : assignments) {
    if (a < gamma) ++sizes[a];
  }
  return sizes;
}

std::vector<size_t> PartitionPlan::Members(size_t p) const {
  std::vector<size_t> out;
  for (size_t i = 0; i < assignments.size(); ++i) {
    if (assignments[i] == p) out.push_back(i);
  }
  return out;
}

}  // namespace fedaudit::data
