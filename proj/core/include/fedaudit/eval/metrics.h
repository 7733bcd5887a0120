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

#ifndef FEDAUDIT_EVAL_METRICS_H_
#define FEDAUDIT_EVAL_METRICS_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "fedaudit/data/dataset.h"

namespace fedaudit::eval {

// How AP_global (AP_local) treats records of the other anomaly class.
enum class OtherClassMode { kExclude, kNegative };

std::string_view OtherClassModeName(OtherClassMode mode);
absl::StatusOr<OtherClassMode> ParseOtherClassMode(std::string_view name);

struct PrPoint {
  double threshold = 0.0;
  double precision = 0.0;
  double recall = 0.0;
};

// Records ranked by descending score, ties by ascending index.
std::vector<size_t> RankByScore(std::span<const double> scores);

// One point per rank position.
absl::StatusOr<std::vector<PrPoint>> PrecisionRecallCurve(std::span<const double> scores,
                                                          const std::vector<bool>& positives);

// sum_i (R_i - R_{i-1}) P_i over the ranking. Needs at least one positive.
absl::StatusOr<double> AveragePrecision(std::span<const double> scores,
                                        const std::vector<bool>& positives);

struct EvalOptions {
  OtherClassMode other_class = OtherClassMode::kExclude;
  uint64_t seed = 0;
};

struct EvalReport {
  // Absent when the class has no records.
  std::optional<double> ap_all;
  std::optional<double> ap_global;
  std::optional<double> ap_local;
  std::vector<PrPoint> pr_all;
  std::vector<PrPoint> pr_global;
  std::vector<PrPoint> pr_local;
  size_t n_records = 0;
  size_t n_global = 0;
  size_t n_local = 0;
  uint64_t seed = 0;
  OtherClassMode other_class = OtherClassMode::kExclude;
};

absl::StatusOr<EvalReport> Evaluate(std::span<const double> scores,
                                    const std::vector<data::Label>& labels,
                                    const EvalOptions& options = {});

// Compact JSON object; curves are included on request.
std::string EvalReportJson(const EvalReport& report, bool include_curves = false);

// Long format: class,threshold,precision,recall.
absl::Status WritePrCurvesCsv(const EvalReport& report, const std::string& path);

}  // namespace fedaudit::eval

#endif  // FEDAUDIT_EVAL_METRICS_H_
