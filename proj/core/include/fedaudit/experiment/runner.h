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

#ifndef FEDAUDIT_EXPERIMENT_RUNNER_H_
#define FEDAUDIT_EXPERIMENT_RUNNER_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "fedaudit/aen/loss.h"
#include "fedaudit/data/persistence.h"
#include "fedaudit/eval/metrics.h"
#include "fedaudit/experiment/config.h"

namespace fedaudit::experiment {

struct RunOptions {
  // Worker threads for independent seeds or sweep cells.
  size_t jobs = 1;
  // Progress lines; null for silence.
  std::ostream* log = nullptr;
  // Also write per-seed precision-recall curves.
  bool write_curves = false;
};

// Loads or synthesises the table, injects anomalies, encodes and partitions.
// Nothing is written.
absl::StatusOr<data::PreparedDataset> PrepareData(const ExperimentConfig& config);

struct PrepareSummary {
  size_t records = 0;      // N
  size_t categorical = 0;  // M
  size_t numeric = 0;      // K
  size_t encoded_dim = 0;  // D_enc
  std::vector<size_t> partition_sizes;
  size_t n_global = 0;
  size_t n_local = 0;
  std::string data_digest;
  bool reused = false;
};

PrepareSummary Summarize(const data::PreparedDataset& prepared);
std::string PrepareSummaryJson(const PrepareSummary& summary);
std::string PrepareSummaryCsv(const PrepareSummary& summary);

// Directory holding the prepared dataset below `out_dir`.
std::string PreparedDir(const std::string& out_dir);

// Prepares and saves under PreparedDir(out_dir).
absl::StatusOr<PrepareSummary> RunPrepare(const ExperimentConfig& config,
                                          const std::string& out_dir);

// Reuses PreparedDir(out_dir) when its digest matches the configuration,
// otherwise prepares and saves afresh.
absl::StatusOr<data::PreparedDataset> LoadOrPrepare(const ExperimentConfig& config,
                                                    const std::string& out_dir,
                                                    bool* reused = nullptr);

struct MetricSummary {
  std::optional<double> mean;
  // Sample standard deviation; absent with fewer than two values.
  std::optional<double> std;
  size_t n = 0;
};

MetricSummary SummarizeMetric(const std::vector<std::optional<double>>& values);

struct SeedResult {
  uint64_t seed = 0;
  eval::EvalReport report;
  size_t rounds_run = 0;
  bool early_stopped = false;
  double final_loss = 0.0;
  // Relative to the run directory.
  std::string history_path;
  std::string checkpoint_path;
};

struct RunResult {
  std::string config_digest;
  std::string data_digest;
  EvalScope scope = EvalScope::kClient0;
  std::vector<SeedResult> seeds;
  MetricSummary ap_all;
  MetricSummary ap_global;
  MetricSummary ap_local;
};

aen::LossSpec MakeLossSpec(const ExperimentConfig& config, const data::EncodedDataset& encoded);

// Federated training, scoring and evaluation for every seed. Per-seed
// artefacts go to `run_dir/seed_<s>/`, the summary to `run_dir/run_result.json`.
absl::StatusOr<RunResult> TrainOnPrepared(const ExperimentConfig& config,
                                          const data::PreparedDataset& prepared,
                                          const std::string& run_dir,
                                          const RunOptions& options = {});

// Re-scores the final checkpoints written by TrainOnPrepared.
absl::StatusOr<RunResult> EvaluateCheckpoints(const ExperimentConfig& config,
                                              const data::PreparedDataset& prepared,
                                              const std::string& run_dir);

std::string RunResultJson(const RunResult& result);
// seed rows followed by mean and std rows.
std::string RunResultCsv(const RunResult& result);

enum class SweepKind { kDp, kCut, kLambda };

std::string_view SweepKindName(SweepKind kind);
absl::StatusOr<SweepKind> ParseSweepKind(std::string_view name);

struct SweepCell {
  std::string name;
  ExperimentConfig config;
};

// Cartesian grid from the [sweep] section. Unless `keep_config`, knobs that
// are not swept are pinned: DP grids run with lambda = 8 and cut 1, cut
// grids with DP on, grad_max = 100 and kappa = 0.
absl::StatusOr<std::vector<SweepCell>> BuildSweepCells(const ExperimentConfig& config,
                                                       SweepKind kind, bool keep_config);

struct SweepResult {
  std::vector<SweepCell> cells;
  std::vector<absl::StatusOr<RunResult>> runs;

  size_t failures() const;
};

// Runs every cell on the shared prepared data; failed cells are recorded and
// do not stop the sweep. Writes `out_dir/cells/<name>/` and `out_dir/sweep.csv`.
SweepResult RunSweep(const std::vector<SweepCell>& cells, const data::PreparedDataset& prepared,
                     const std::string& out_dir, const RunOptions& options = {});

std::string SweepCsv(const SweepResult& result);

}  // namespace fedaudit::experiment

#endif  // FEDAUDIT_EXPERIMENT_RUNNER_H_
