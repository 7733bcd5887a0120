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

#ifndef FEDAUDIT_FED_FEDERATION_H_
#define FEDAUDIT_FED_FEDERATION_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "fedaudit/aen/loss.h"
#include "fedaudit/aen/model.h"
#include "fedaudit/aen/split.h"
#include "fedaudit/dp/dp.h"
#include "fedaudit/nn/optimizer.h"
#include "fedaudit/nn/tensor.h"

namespace fedaudit::fed {

struct EarlyStopping {
  bool enabled = true;
  // Rounds without sufficient improvement before stopping.
  size_t patience = 10;
  // Minimum relative improvement of the best round loss.
  double tolerance = 1e-4;
};

struct FederationConfig {
  size_t lambda = 1;      // clients selected per round
  size_t gamma = 1;       // total clients
  size_t rounds = 1;      // R
  size_t iterations = 1;  // tau, local steps per round
  size_t batch_size = 32;
  nn::OptimizerConfig optimizer;
  dp::DpConfig dp;
  aen::SplitMask split;
  uint64_t seed = 0;
  EarlyStopping early_stopping;
  // Worker threads for client updates; results do not depend on it.
  size_t threads = 1;
  // Checkpoint every this many rounds (0: only at termination, when a
  // directory is set).
  size_t checkpoint_every = 0;
  std::string checkpoint_dir;
  // Recorded in checkpoints.
  std::string config_digest;
};

// Tracks the best round loss and signals when `patience` consecutive rounds
// failed to beat it by a relative `tolerance`.
class EarlyStopTracker {
 public:
  explicit EarlyStopTracker(const EarlyStopping& rule) : rule_(rule) {}

  // Returns true when training should stop after this round.
  bool Update(double round_loss);

 private:
  EarlyStopping rule_;
  bool has_best_ = false;
  double best_ = 0.0;
  size_t stale_ = 0;
};

absl::Status ValidateFederationConfig(const FederationConfig& config);

// Decentral participant. Owns its partition, its private layers and its
// optimizer moments; none of these leave the client.
class ClientState {
 public:
  ClientState(size_t id, nn::Tensor2 data, aen::ParameterSubset private_params,
              nn::OptimizerState optimizer)
      : id_(id),
        data_(std::move(data)),
        private_params_(std::move(private_params)),
        optimizer_(std::move(optimizer)) {}

  size_t id() const { return id_; }
  size_t num_records() const { return data_.rows(); }
  const aen::ParameterSubset& private_params() const { return private_params_; }
  int64_t optimizer_steps() const { return optimizer_.step; }

 private:
  friend struct ClientUpdateAccess;

  size_t id_;
  nn::Tensor2 data_;
  aen::ParameterSubset private_params_;
  nn::OptimizerState optimizer_;
};

struct ClientLossStats {
  double mean_loss = 0.0;  // mean over local iterations of the batch mean loss
  size_t iterations = 0;
  size_t num_records = 0;  // aggregation weight
};

// Everything a client reveals to the orchestrator after a round.
struct ClientUpdateResult {
  aen::ParameterSubset public_params;
  ClientLossStats stats;
};

// Builds a client with private layers seeded from (seed, id) and fresh
// optimizer moments for the full model.
absl::StatusOr<ClientState> MakeClient(size_t id, nn::Tensor2 data,
                                       const FederationConfig& config);

// Runs tau local steps from the merged (central public + client private)
// model and returns the updated public layers. Private layers and optimizer
// state stay in `client`.
absl::StatusOr<ClientUpdateResult> ClientUpdate(ClientState& client,
                                                const aen::ParameterSubset& central_public,
                                                size_t round, const FederationConfig& config,
                                                const aen::LossSpec& loss_spec);

// Weighted coordinate-wise mean with weights normalised over the inputs.
absl::StatusOr<aen::ParameterSubset> FedAvg(const std::vector<aen::ParameterSubset>& updates,
                                            const std::vector<double>& weights);

struct RoundRecord {
  size_t round = 0;  // 1-based
  std::vector<size_t> clients;
  std::vector<double> client_losses;
  double mean_loss = 0.0;
  std::string public_digest;
  double elapsed_ms = 0.0;
};

struct FederationResult {
  aen::ParameterSubset central_public;
  std::vector<aen::ParameterSubset> client_private;
  std::vector<RoundRecord> history;
  bool early_stopped = false;
  aen::SplitMask split;

  // Central public layers merged with client `k`'s private layers.
  absl::StatusOr<aen::AenParams> ModelForClient(size_t k) const;
};

using RoundCallback = std::function<void(const RoundRecord&)>;

// Synchronous rounds: select lambda clients, broadcast, update, aggregate.
absl::StatusOr<FederationResult> RunFederation(const FederationConfig& config,
                                               const std::vector<nn::Tensor2>& partitions,
                                               const aen::LossSpec& loss_spec,
                                               const RoundCallback& on_round = {});

// Sorted ids of the clients taking part in `round`.
std::vector<size_t> SelectClients(const FederationConfig& config, size_t round);

// One row per round. A non-empty `config_digest` adds a constant column.
absl::Status WriteHistoryCsv(const std::vector<RoundRecord>& history, const std::string& path,
                             bool include_timing = true, const std::string& config_digest = "");

// Writes one model checkpoint per client under `dir/client_<k>`.
absl::Status SaveFederationCheckpoint(const FederationResult& result, uint64_t seed,
                                      const std::string& dir,
                                      const std::string& config_digest = "");

}  // namespace fedaudit::fed

#endif  // FEDAUDIT_FED_FEDERATION_H_
