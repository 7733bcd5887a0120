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

#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "acceptance/criteria.h"
#include "fedaudit/experiment/config.h"
#include "fedaudit/experiment/runner.h"

namespace fedaudit::acceptance {
namespace {

namespace fs = std::filesystem;

using experiment::ExperimentConfig;
using experiment::MetricSummary;
using experiment::RunResult;

// The desk-scale synthetic setup: 8000 records over six categorical
// attributes (cardinality 10-50) and one numeric, 20 global and 40 local
// anomalies, iid over 8 partitions, 8 clients, R=20, tau=100, rho=32.
ExperimentConfig SyntheticSetup() {
  ExperimentConfig c;
  c.dataset.synthetic_records = 8000;
  c.dataset.synthetic_cardinalities = {10, 15, 20, 30, 40, 50};
  c.anomalies = {20, 40};
  c.federation.mode = data::PartitionMode::kIid;
  c.federation.gamma = 8;
  c.federation.lambda = 8;
  c.federation.rounds = 20;
  c.federation.iterations = 100;
  c.federation.batch_size = 32;
  c.dp.enabled = false;
  c.seeds = {1, 2, 3, 4, 5};
  return c;
}

struct Run {
  std::string label;
  RunResult result;
};

absl::StatusOr<Run> TrainCell(const Context& ctx, const std::string& criterion,
                              const std::string& label, ExperimentConfig config) {
  const std::string dir = (fs::path(ctx.work_dir) / criterion / label).string();
  config.output_dir = dir;
  if (absl::Status s = experiment::ValidateConfig(config); !s.ok()) return s;
  // All cells of a criterion share one prepared dataset.
  auto prepared =
      experiment::LoadOrPrepare(config, (fs::path(ctx.work_dir) / criterion).string());
  if (!prepared.ok()) return prepared.status();
  experiment::RunOptions options{ctx.jobs, nullptr, false};
  auto result = experiment::TrainOnPrepared(config, *prepared, dir, options);
  if (!result.ok()) return result.status();
  return Run{label, *std::move(result)};
}

double Mean(const MetricSummary& m) { return m.mean.value_or(NAN); }
double Std(const MetricSummary& m) { return m.std.value_or(0.0); }

std::string Describe(const Run& r) {
  return absl::StrFormat("%s: AP_global %.3f+-%.3f AP_all %.3f", r.label,
                         Mean(r.result.ap_global), Std(r.result.ap_global),
                         Mean(r.result.ap_all));
}

Outcome Failed(const std::string& label, const absl::Status& s) {
  return {Verdict::kFail, absl::StrCat(label, " failed: ", s.message())};
}

}  // namespace

Outcome SyntheticEndToEnd(const Context& ctx) {
  ExperimentConfig eight = SyntheticSetup();
  ExperimentConfig one = eight;
  one.federation.lambda = 1;
  auto a = TrainCell(ctx, "c9", "lambda=8", eight);
  if (!a.ok()) return Failed("lambda=8", a.status());
  auto b = TrainCell(ctx, "c9", "lambda=1", one);
  if (!b.ok()) return Failed("lambda=1", b.status());
  const bool accurate = Mean(a->result.ap_global) >= 0.85;
  const bool trend = Mean(a->result.ap_all) >= Mean(b->result.ap_all);
  const std::string detail = absl::StrCat(
      "5 seeds; ", Describe(*a), "; ", Describe(*b), "; need AP_global(8) >= 0.85 [",
      accurate ? "ok" : "no", "] and AP_all(8) >= AP_all(1) [", trend ? "ok" : "no", "]");
  return {accurate && trend ? Verdict::kPass : Verdict::kFail, detail};
}

Outcome DpRobustness(const Context& ctx) {
  struct Cell {
    double grad_max;
    double kappa;
  };
  const std::vector<Cell> cells = {{0.01, 0.0}, {0.01, 0.1}, {1.0, 0.0},  {1.0, 0.1},
                                   {10.0, 0.0}, {10.0, 0.1}, {1.0, 10.0}};
  std::vector<Run> runs;
  for (const Cell& cell : cells) {
    ExperimentConfig config = SyntheticSetup();
    config.dp = {true, cell.grad_max, cell.kappa};
    config.split = {1, 1};
    const std::string label = absl::StrCat("grad_max=", cell.grad_max, "_kappa=", cell.kappa);
    auto run = TrainCell(ctx, "c10", label, config);
    if (!run.ok()) return Failed(label, run.status());
    runs.push_back(*std::move(run));
  }
  auto ap = [&](size_t i) { return Mean(runs[i].result.ap_global); };
  std::vector<std::string> parts;
  for (const Run& r : runs) parts.push_back(Describe(r));
  const bool robust_1 = std::fabs(ap(3) - ap(2)) <= 0.1;
  const bool robust_10 = std::fabs(ap(5) - ap(4)) <= 0.1;
  const bool degrades = ap(2) - ap(6) >= 0.1;
  const std::string detail = absl::StrCat(
      "5 seeds; ", absl::StrJoin(parts, "; "), "; |kappa 0.1 - kappa 0| <= 0.1 at grad_max 1 [",
      robust_1 ? "ok" : "no", "] and 10 [", robust_10 ? "ok" : "no",
      "]; kappa 10 drops AP_global by >= 0.1 [", degrades ? "ok" : "no", "]");
  return {robust_1 && robust_10 && degrades ? Verdict::kPass : Verdict::kFail, detail};
}

Outcome CutLayerTrend(const Context& ctx) {
  std::vector<Run> runs;
  for (int cut : {1, 4, 7}) {
    ExperimentConfig config = SyntheticSetup();
    config.dp = {true, 100.0, 0.0};
    config.split = {cut, cut};
    const std::string label = absl::StrCat("cut=", cut);
    auto run = TrainCell(ctx, "c11", label, config);
    if (!run.ok()) return Failed(label, run.status());
    runs.push_back(*std::move(run));
  }
  auto step_ok = [&](const Run& hi, const Run& lo, double& pooled) {
    pooled = std::sqrt((Std(hi.result.ap_global) * Std(hi.result.ap_global) +
                        Std(lo.result.ap_global) * Std(lo.result.ap_global)) /
                       2.0);
    return Mean(lo.result.ap_global) <= Mean(hi.result.ap_global) + pooled;
  };
  double pooled_14 = 0.0;
  double pooled_47 = 0.0;
  const bool step_14 = step_ok(runs[0], runs[1], pooled_14);
  const bool step_47 = step_ok(runs[1], runs[2], pooled_47);
  const std::string detail = absl::StrFormat(
      "5 seeds; %s; %s; %s; cut 1->4 non-increasing within %.3f [%s], 4->7 within %.3f [%s]",
      Describe(runs[0]), Describe(runs[1]), Describe(runs[2]), pooled_14, step_14 ? "ok" : "no",
      pooled_47, step_47 ? "ok" : "no");
  return {step_14 && step_47 ? Verdict::kPass : Verdict::kFail, detail};
}

Outcome FullReproduction(const Context& ctx) {
  if (ctx.reproduction_config.empty()) {
    return {Verdict::kSkip,
            "no payments-data config given (--reproduction-config or "
            "FEDAUDIT_REPRODUCTION_CONFIG)"};
  }
  auto config = experiment::LoadConfig(ctx.reproduction_config);
  if (!config.ok()) return Failed("config", config.status());
  config->anomalies = {60, 140};
  config->federation.mode = data::PartitionMode::kIid;
  config->federation.gamma = 8;
  config->federation.lambda = 8;
  config->federation.rounds = 100;
  config->federation.iterations = 200;
  config->federation.batch_size = 64;
  config->dp = {true, 1.0, 0.1};
  config->split = {1, 1};
  config->seeds = {1, 2, 3, 4, 5};
  auto run = TrainCell(ctx, "c12", "payments", *config);
  if (!run.ok()) return Failed("payments", run.status());
  const bool ok = Mean(run->result.ap_global) >= 0.90;
  return {ok ? Verdict::kPass : Verdict::kFail,
          absl::StrCat("5 seeds; ", Describe(*run), "; need AP_global >= 0.90")};
}

}  // namespace fedaudit::acceptance
