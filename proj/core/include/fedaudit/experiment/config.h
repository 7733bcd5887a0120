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

#ifndef FEDAUDIT_EXPERIMENT_CONFIG_H_
#define FEDAUDIT_EXPERIMENT_CONFIG_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "fedaudit/data/dataset.h"
#include "fedaudit/eval/metrics.h"
#include "fedaudit/fed/federation.h"
#include "fedaudit/nn/optimizer.h"

namespace fedaudit::experiment {

// Which records are scored after training: client 0's partition (where the
// injected anomalies live) or the whole dataset.
enum class EvalScope { kClient0, kAll };

std::string_view EvalScopeName(EvalScope scope);
absl::StatusOr<EvalScope> ParseEvalScope(std::string_view name);

struct DatasetSection {
  // Empty: generate a synthetic table instead of reading a CSV.
  std::string csv_path;
  std::vector<std::string> categorical;
  std::vector<std::string> numeric;
  std::string department;
  size_t synthetic_records = 8000;
  std::vector<size_t> synthetic_cardinalities = {10, 15, 20, 30, 40, 50};
  size_t synthetic_patterns = 24;
  double synthetic_noise = 0.05;
  // Drives synthesis, injection and partitioning; independent of the
  // training seeds.
  uint64_t data_seed = 1;

  friend bool operator==(const DatasetSection&, const DatasetSection&) = default;
};

struct AnomalySection {
  size_t n_global = 20;
  size_t n_local = 40;

  friend bool operator==(const AnomalySection&, const AnomalySection&) = default;
};

struct FederationSection {
  data::PartitionMode mode = data::PartitionMode::kIid;
  size_t gamma = 8;
  size_t lambda = 8;
  size_t rounds = 20;
  size_t iterations = 100;
  size_t batch_size = 32;
  // Adam, or plain SGD with the same learning rate.
  nn::OptimizerKind optimizer = nn::OptimizerKind::kAdam;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  bool early_stop = true;
  size_t patience = 10;
  double rel_tol = 1e-4;
  size_t checkpoint_every = 0;

  friend bool operator==(const FederationSection&, const FederationSection&) = default;
};

struct DpSection {
  bool enabled = false;
  double grad_max = 1.0;
  double kappa = 0.0;

  friend bool operator==(const DpSection&, const DpSection&) = default;
};

struct SplitSection {
  int cut_encoder = 1;
  int cut_decoder = 1;

  friend bool operator==(const SplitSection&, const SplitSection&) = default;
};

struct LossSection {
  double vartheta = 2.0 / 3.0;
  double clamp_epsilon = 1e-6;

  friend bool operator==(const LossSection&, const LossSection&) = default;
};

struct EvalSection {
  EvalScope scope = EvalScope::kClient0;
  eval::OtherClassMode other_class = eval::OtherClassMode::kExclude;

  friend bool operator==(const EvalSection&, const EvalSection&) = default;
};

struct SweepSection {
  std::vector<double> grad_max = {0.001, 0.01, 0.1, 1.0, 10.0};
  std::vector<double> kappa = {0.0, 0.001, 0.005, 0.01, 0.015, 0.1, 0.15, 0.2};
  std::vector<int> cut = {1, 2, 3, 4, 5, 6, 7};
  std::vector<size_t> lambda = {1, 4, 8};

  friend bool operator==(const SweepSection&, const SweepSection&) = default;
};

struct ExperimentConfig {
  DatasetSection dataset;
  AnomalySection anomalies;
  FederationSection federation;
  DpSection dp;
  SplitSection split;
  LossSection loss;
  EvalSection eval;
  SweepSection sweep;
  std::vector<uint64_t> seeds = {1, 2, 3, 4, 5};
  std::string output_dir = "fedaudit_out";

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

// INI-style text: `[section]` headers, `key = value` lines, comma-separated
// lists, `#` or `;` comment lines. Keys not given keep their defaults;
// unknown sections or keys are errors.
absl::StatusOr<ExperimentConfig> ParseConfig(std::string_view text);
absl::StatusOr<ExperimentConfig> LoadConfig(const std::string& path);

// Canonical text listing every field; ParseConfig(SerializeConfig(c)) == c.
std::string SerializeConfig(const ExperimentConfig& config);

// FNV-1a over the canonical text without output_dir.
std::string ConfigDigest(const ExperimentConfig& config);
// Same, restricted to the fields that shape the prepared dataset.
std::string DataDigest(const ExperimentConfig& config);

absl::Status ValidateConfig(const ExperimentConfig& config);

// Federation settings for one training seed.
fed::FederationConfig ToFederationConfig(const ExperimentConfig& config, uint64_t seed);

}  // namespace fedaudit::experiment

#endif  // FEDAUDIT_EXPERIMENT_CONFIG_H_
