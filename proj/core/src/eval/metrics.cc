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

#include "fedaudit/eval/metrics.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "fedaudit/errors.h"
#include "fedaudit/status_macros.h"
#include "json.hpp"

namespace fedaudit::eval {
namespace {

using nlohmann::json;

absl::Status CheckInputs(std::span<const double> scores, const std::vector<bool>& positives) {
  if (scores.size() != positives.size()) {
    return ShapeError(absl::StrCat(scores.size(), " scores but ", positives.size(), " labels"));
  }
  for (size_t i = 0; i < scores.size(); ++i) {
    if (!std::isfinite(scores[i])) {
      return NumericError(absl::StrCat("non-finite score at record ", i));
    }
  }
  if (std::find(positives.begin(), positives.end(), true) == positives.end()) {
    return DataError("eval error: no positive records");
  }
  return absl::OkStatus();
}

struct Subset {
  std::vector<double> scores;
  std::vector<bool> positives;
};

// Positives are records with label `target` (or any anomaly when `target` is
// normal). Records labelled `other` are dropped or kept as negatives.
Subset Select(std::span<const double> scores, const std::vector<data::Label>& labels,
              std::optional<data::Label> target, std::optional<data::Label> other,
              OtherClassMode mode) {
  Subset s;
  for (size_t i = 0; i < scores.size(); ++i) {
    if (other.has_value() && labels[i] == *other && mode == OtherClassMode::kExclude) continue;
    s.scores.push_back(scores[i]);
    s.positives.push_back(target.has_value() ? labels[i] == *target
                                             : labels[i] != data::Label::kNormal);
  }
  return s;
}

json CurveJson(const std::vector<PrPoint>& curve) {
  json out = json::array();
  for (const PrPoint& p : curve) out.push_back({p.threshold, p.precision, p.recall});
  return out;
}

json OptionalJson(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

std::string_view OtherClassModeName(OtherClassMode mode) {
  return mode == OtherClassMode::kExclude ? "exclude" : "negative";
}

absl::StatusOr<OtherClassMode> ParseOtherClassMode(std::string_view name) {
  if (name == "exclude") return OtherClassMode::kExclude;
  if (name == "negative") return OtherClassMode::kNegative;
  return ConfigError(absl::StrCat("unknown AP mode '", std::string(name), "'"));
}

std::vector<size_t> RankByScore(std::span<const double> scores) {
  std::vector<size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return scores[a] > scores[b]; });
  return order;
}

absl::StatusOr<std::vector<PrPoint>> PrecisionRecallCurve(std::span<const double> scores,
                                                          const std::vector<bool>& positives) {
  FEDAUDIT_RETURN_IF_ERROR(CheckInputs(scores, positives));
  const double total =
      static_cast<double>(std::count(positives.begin(), positives.end(), true));
  std::vector<PrPoint> curve;
  curve.reserve(scores.size());
  size_t tp = 0;
  const std::vector<size_t> order = RankByScore(scores);
  for (size_t k = 0; k < order.size(); ++k) {
    if (positives[order[k]]) ++tp;
    curve.push_back({scores[order[k]], static_cast<double>(tp) / static_cast<double>(k + 1),
                     static_cast<double>(tp) / total});
  }
  return curve;
}

absl::StatusOr<double> AveragePrecision(std::span<const double> scores,
                                        const std::vector<bool>& positives) {
  FEDAUDIT_ASSIGN_OR_RETURN(std::vector<PrPoint> curve, PrecisionRecallCurve(scores, positives));
  double ap = 0.0;
  double prev_recall = 0.0;
  for (const PrPoint& p : curve) {
    ap += (p.recall - prev_recall) * p.precision;
    prev_recall = p.recall;
  }
  return ap;
}

absl::StatusOr<EvalReport> Evaluate(std::span<const double> scores,
                                    const std::vector<data::Label>& labels,
                                    const EvalOptions& options) {
  if (scores.size() != labels.size()) {
    return ShapeError(absl::StrCat(scores.size(), " scores but ", labels.size(), " labels"));
  }
  EvalReport report;
  report.n_records = scores.size();
  report.seed = options.seed;
  report.other_class = options.other_class;
  for (data::Label l : labels) {
    if (l == data::Label::kGlobalAnomaly) ++report.n_global;
    if (l == data::Label::kLocalAnomaly) ++report.n_local;
  }

  using data::Label;
  auto fill = [&](std::optional<Label> target, std::optional<Label> other, size_t count,
                  std::optional<double>& ap, std::vector<PrPoint>& curve) -> absl::Status {
    if (count == 0) return absl::OkStatus();
    const Subset s = Select(scores, labels, target, other, options.other_class);
    FEDAUDIT_ASSIGN_OR_RETURN(curve, PrecisionRecallCurve(s.scores, s.positives));
    FEDAUDIT_ASSIGN_OR_RETURN(ap, AveragePrecision(s.scores, s.positives));
    return absl::OkStatus();
  };
  FEDAUDIT_RETURN_IF_ERROR(fill(std::nullopt, std::nullopt, report.n_global + report.n_local,
                                report.ap_all, report.pr_all));
  FEDAUDIT_RETURN_IF_ERROR(fill(Label::kGlobalAnomaly, Label::kLocalAnomaly, report.n_global,
                                report.ap_global, report.pr_global));
  FEDAUDIT_RETURN_IF_ERROR(fill(Label::kLocalAnomaly, Label::kGlobalAnomaly, report.n_local,
                                report.ap_local, report.pr_local));
  return report;
}

std::string EvalReportJson(const EvalReport& report, bool include_curves) {
  json out = {{"ap_all", OptionalJson(report.ap_all)},
              {"ap_global", OptionalJson(report.ap_global)},
              {"ap_local", OptionalJson(report.ap_local)},
              {"n_records", report.n_records},
              {"n_global", report.n_global},
              {"n_local", report.n_local},
              {"seed", report.seed},
              {"other_class", std::string(OtherClassModeName(report.other_class))}};
  if (include_curves) {
    out["pr_curves"] = {{"all", CurveJson(report.pr_all)},
                        {"global", CurveJson(report.pr_global)},
                        {"local", CurveJson(report.pr_local)}};
  }
  return out.dump();
}

absl::Status WritePrCurvesCsv(const EvalReport& report, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return DataError(absl::StrCat("cannot write '", path, "'"));
  out << "class,threshold,precision,recall\n";
  const std::pair<const char*, const std::vector<PrPoint>*> curves[] = {
      {"all", &report.pr_all}, {"global", &report.pr_global}, {"local", &report.pr_local}};
  for (const auto& [name, curve] : curves) {
    for (const PrPoint& p : *curve) {
      out << absl::StrFormat("%s,%.17g,%.17g,%.17g\n", name, p.threshold, p.precision, p.recall);
    }
  }
  if (!out) return DataError(absl::StrCat("write failed for '", path, "'"));
  return absl::OkStatus();
}

}  // namespace fedaudit::eval
