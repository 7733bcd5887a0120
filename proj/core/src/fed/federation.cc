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

#include "fedaudit/fed/federation.h"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <optional>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "fedaudit/aen/checkpoint.h"
#include "fedaudit/errors.h"
#include "fedaudit/nn/rng.h"
#include "fedaudit/status_macros.h"
#include "fedaudit/util/fnv.h"
#include "fedaudit/util/parallel.h"

namespace fedaudit::fed {

struct ClientUpdateAccess {
  static const nn::Tensor2& data(const ClientState& c) { return c.data_; }
  static aen::ParameterSubset& private_params(ClientState& c) { return c.private_params_; }
  static nn::OptimizerState& optimizer(ClientState& c) { return c.optimizer_; }
};

namespace {

constexpr uint64_t kSelectionStream = 0x5E1EC7;

absl::Status WithClient(const absl::Status& status, size_t client) {
  return absl::Status(status.code(), absl::StrCat("client ", client, ": ", status.message()));
}

std::string PublicDigest(const aen::ParameterSubset& subset) {
  uint64_t h = util::kFnvOffset;
  for (const nn::LayerParams& l : subset.layers) {
    h = util::Fnv1a64(l.weights.values(), h);
    h = util::Fnv1a64(std::span<const double>(l.bias), h);
  }
  return util::HexDigest(h);
}

bool SameLayerShapes(const aen::ParameterSubset& a, const aen::ParameterSubset& b) {
  if (a.indices != b.indices || a.layers.size() != b.layers.size()) return false;
  for (size_t i = 0; i < a.layers.size(); ++i) {
    if (!a.layers[i].weights.SameShape(b.layers[i].weights) ||
        a.layers[i].bias.size() != b.layers[i].bias.size()) {
      return false;
    }
  }
  return true;
}

}  // namespace

bool EarlyStopTracker::Update(double round_loss) {
  if (!rule_.enabled) return false;
  if (!has_best_ || round_loss < best_ - rule_.tolerance * std::abs(best_)) {
    has_best_ = true;
    best_ = round_loss;
    stale_ = 0;
    return false;
  }
  return ++stale_ >= rule_.patience;
}

absl::Status ValidateFederationConfig(const FederationConfig& config) {
  if (config.gamma < 1) return ConfigError("gamma must be >= 1");
  if (config.lambda < 1 || config.lambda > config.gamma) {
    return ConfigError(
        absl::StrCat("lambda must lie in [1, gamma=", config.gamma, "], got ", config.lambda));
  }
  if (config.rounds < 1) return ConfigError("rounds must be >= 1");
  if (config.iterations < 1) return ConfigError("iterations per round must be >= 1");
  if (config.batch_size < 1) return ConfigError("batch size must be >= 1");
  if (config.threads < 1) return ConfigError("threads must be >= 1");
  if (config.early_stopping.enabled &&
      (config.early_stopping.patience < 1 || !(config.early_stopping.tolerance >= 0.0))) {
    return ConfigError("early stopping needs patience >= 1 and tolerance >= 0");
  }
  FEDAUDIT_RETURN_IF_ERROR(nn::ValidateOptimizer(config.optimizer));
  FEDAUDIT_RETURN_IF_ERROR(dp::ValidateDpConfig(config.dp));
  return aen::ValidateMask(config.split);
}

absl::StatusOr<ClientState> MakeClient(size_t id, nn::Tensor2 data,
                                       const FederationConfig& config) {
  if (data.rows() == 0) return FederationError(absl::StrCat("client ", id, " has no records"));
  FEDAUDIT_ASSIGN_OR_RETURN(aen::AenParams init,
                            aen::BuildAen(data.cols(), nn::DeriveSeed(config.seed, {id})));
  nn::OptimizerState optimizer = nn::InitOptimizer(init.layers, config.optimizer);
  FEDAUDIT_ASSIGN_OR_RETURN(aen::SplitResult split, aen::SplitParams(init, config.split));
  return ClientState(id, std::move(data), std::move(split.private_part), std::move(optimizer));
}

absl::StatusOr<ClientUpdateResult> ClientUpdate(ClientState& client,
                                                const aen::ParameterSubset& central_public,
                                                size_t round, const FederationConfig& config,
                                                const aen::LossSpec& loss_spec) {
  const nn::Tensor2& data = ClientUpdateAccess::data(client);
  if (data.rows() == 0) {
    return FederationError(absl::StrCat("client ", client.id(), " has an empty partition"));
  }
  aen::ParameterSubset& priv = ClientUpdateAccess::private_params(client);
  FEDAUDIT_ASSIGN_OR_RETURN(aen::AenParams model,
                            aen::MergeParams(central_public, priv, config.split));
  FEDAUDIT_RETURN_IF_ERROR(aen::ValidateAen(model));
  if (model.input_dim() != data.cols()) {
    return ShapeError(absl::StrCat("model input ", model.input_dim(), " vs client data width ",
                                   data.cols()));
  }

  nn::OptimizerState& optimizer = ClientUpdateAccess::optimizer(client);
  const aen::ReconstructionLoss loss(loss_spec);
  nn::Rng rng(nn::DeriveSeed(config.seed, {client.id(), round}));
  std::vector<size_t> idx(config.batch_size);
  double loss_sum = 0.0;
  for (size_t it = 0; it < config.iterations; ++it) {
    for (size_t& i : idx) i = rng.UniformIndex(data.rows());
    const nn::Tensor2 batch = data.GatherRows(idx);
    FEDAUDIT_ASSIGN_OR_RETURN(
        dp::PrivateBatch step,
        dp::PrivateBatchGradient(batch, batch, model.layers, loss, config.dp, rng));
    double batch_loss = 0.0;
    for (double l : step.losses) batch_loss += l;
    loss_sum += batch_loss / static_cast<double>(step.losses.size());
    FEDAUDIT_RETURN_IF_ERROR(nn::ApplyUpdate(model.layers, step.gradient, optimizer));
  }
  for (const nn::LayerParams& l : model.layers) {
    if (!l.weights.AllFinite()) {
      return NumericError(absl::StrCat("non-finite parameters after round ", round));
    }
  }

  FEDAUDIT_ASSIGN_OR_RETURN(aen::SplitResult split, aen::SplitParams(model, config.split));
  priv = std::move(split.private_part);
  ClientUpdateResult result;
  result.public_params = std::move(split.public_part);
  result.stats.iterations = config.iterations;
  result.stats.num_records = data.rows();
  result.stats.mean_loss =
      config.iterations == 0 ? 0.0 : loss_sum / static_cast<double>(config.iterations);
  return result;
}

absl::StatusOr<aen::ParameterSubset> FedAvg(const std::vector<aen::ParameterSubset>& updates,
                                            const std::vector<double>& weights) {
  if (updates.empty()) return FederationError("aggregation error: no updates");
  if (updates.size() != weights.size()) {
    return FederationError("aggregation error: one weight per update required");
  }
  double total = 0.0;
  for (double w : weights) {
    if (!(w > 0.0) || !std::isfinite(w)) {
      return FederationError(absl::StrCat("aggregation error: invalid weight ", w));
    }
    total += w;
  }
  for (size_t k = 1; k < updates.size(); ++k) {
    if (!SameLayerShapes(updates[0], updates[k])) {
      return FederationError(absl::StrCat("aggregation error: update ", k, " differs in shape"));
    }
  }
  aen::ParameterSubset acc = updates[0];
  const double w0 = weights[0] / total;
  for (nn::LayerParams& l : acc.layers) {
    for (double& v : l.weights.values()) v *= w0;
    for (double& v : l.bias) v *= w0;
  }
  for (size_t k = 1; k < updates.size(); ++k) {
    const double w = weights[k] / total;
    for (size_t i = 0; i < acc.layers.size(); ++i) {
      auto dst = acc.layers[i].weights.values();
      auto src = updates[k].layers[i].weights.values();
      for (size_t j = 0; j < dst.size(); ++j) dst[j] += w * src[j];
      for (size_t j = 0; j < acc.layers[i].bias.size(); ++j) {
        acc.layers[i].bias[j] += w * updates[k].layers[i].bias[j];
      }
    }
  }
  return acc;
}

std::vector<size_t> SelectClients(const FederationConfig& config, size_t round) {
  std::vector<size_t> ids(config.gamma);
  std::iota(ids.begin(), ids.end(), 0);
  if (config.lambda < config.gamma) {
    nn::Rng rng(nn::DeriveSeed(config.seed, {kSelectionStream, round}));
    for (size_t i = 0; i < config.lambda; ++i) {
      std::swap(ids[i], ids[i + rng.UniformIndex(config.gamma - i)]);
    }
    ids.resize(config.lambda);
    std::sort(ids.begin(), ids.end());
  }
  return ids;
}

absl::StatusOr<aen::AenParams> FederationResult::ModelForClient(size_t k) const {
  if (k >= client_private.size()) {
    return FederationError(absl::StrCat("no client ", k));
  }
  return aen::MergeParams(central_public, client_private[k], split);
}

absl::StatusOr<FederationResult> RunFederation(const FederationConfig& config,
                                               const std::vector<nn::Tensor2>& partitions,
                                               const aen::LossSpec& loss_spec,
                                               const RoundCallback& on_round) {
  FEDAUDIT_RETURN_IF_ERROR(ValidateFederationConfig(config));
  if (partitions.size() != config.gamma) {
    return FederationError(absl::StrCat("expected ", config.gamma, " partitions, got ",
                                        partitions.size()));
  }
  const size_t dim = partitions[0].cols();
  FEDAUDIT_RETURN_IF_ERROR(aen::ValidateLossSpec(loss_spec, dim));

  std::vector<ClientState> clients;
  clients.reserve(config.gamma);
  for (size_t k = 0; k < config.gamma; ++k) {
    if (partitions[k].cols() != dim) {
      return ShapeError(absl::StrCat("partition ", k, " has ", partitions[k].cols(),
                                     " columns, expected ", dim));
    }
    FEDAUDIT_ASSIGN_OR_RETURN(ClientState c, MakeClient(k, partitions[k], config));
    clients.push_back(std::move(c));
  }

  FederationResult result;
  result.split = config.split;
  {
    FEDAUDIT_ASSIGN_OR_RETURN(aen::AenParams init, aen::BuildAen(dim, config.seed));
    FEDAUDIT_ASSIGN_OR_RETURN(aen::SplitResult split, aen::SplitParams(init, config.split));
    result.central_public = std::move(split.public_part);
  }

  auto snapshot_private = [&] {
    result.client_private.clear();
    for (const ClientState& c : clients) result.client_private.push_back(c.private_params());
  };
  auto checkpoint = [&](const std::string& name) -> absl::Status {
    if (config.checkpoint_dir.empty()) return absl::OkStatus();
    snapshot_private();
    return SaveFederationCheckpoint(
        result, config.seed, (std::filesystem::path(config.checkpoint_dir) / name).string(),
        config.config_digest);
  };

  EarlyStopTracker stopper(config.early_stopping);
  for (size_t round = 1; round <= config.rounds; ++round) {
    const auto start = std::chrono::steady_clock::now();
    const std::vector<size_t> selected = SelectClients(config, round);
    std::vector<std::optional<absl::StatusOr<ClientUpdateResult>>> outcomes(selected.size());

    auto work = [&](size_t slot) {
      outcomes[slot] =
          ClientUpdate(clients[selected[slot]], result.central_public, round, config, loss_spec);
    };
    util::ParallelFor(selected.size(), config.threads, work);

    RoundRecord record;
    record.round = round;
    record.clients = selected;
    std::vector<aen::ParameterSubset> updates;
    std::vector<double> weights;
    for (size_t s = 0; s < selected.size(); ++s) {
      absl::StatusOr<ClientUpdateResult>& out = *outcomes[s];
      if (!out.ok()) return WithClient(out.status(), selected[s]);
      record.client_losses.push_back(out->stats.mean_loss);
      weights.push_back(static_cast<double>(out->stats.num_records));
      updates.push_back(std::move(out->public_params));
    }
    FEDAUDIT_ASSIGN_OR_RETURN(result.central_public, FedAvg(updates, weights));

    double sum = 0.0;
    for (double l : record.client_losses) sum += l;
    record.mean_loss = sum / static_cast<double>(record.client_losses.size());
    record.public_digest = PublicDigest(result.central_public);
    record.elapsed_ms = std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - start)
                            .count();
    if (!std::isfinite(record.mean_loss)) {
      return NumericError(absl::StrCat("non-finite training loss in round ", round));
    }
    result.history.push_back(record);
    if (on_round) on_round(record);

    if (config.checkpoint_every > 0 && round % config.checkpoint_every == 0 &&
        round != config.rounds) {
      FEDAUDIT_RETURN_IF_ERROR(checkpoint(absl::StrFormat("round_%04d", round)));
    }
    if (stopper.Update(record.mean_loss)) {
      result.early_stopped = true;
      break;
    }
  }
  snapshot_private();
  FEDAUDIT_RETURN_IF_ERROR(checkpoint("final"));
  return result;
}

absl::Status WriteHistoryCsv(const std::vector<RoundRecord>& history, const std::string& path,
                             bool include_timing, const std::string& config_digest) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return DataError(absl::StrCat("cannot write '", path, "'"));
  out << "round,client_ids,client_losses,mean_loss,public_digest";
  if (include_timing) out << ",elapsed_ms";
  if (!config_digest.empty()) out << ",config_digest";
  out << "\n";
  for (const RoundRecord& r : history) {
    std::vector<std::string> losses;
    for (double l : r.client_losses) losses.push_back(absl::StrFormat("%.17g", l));
    out << r.round << "," << absl::StrJoin(r.clients, ";") << "," << absl::StrJoin(losses, ";")
        << "," << absl::StrFormat("%.17g", r.mean_loss) << "," << r.public_digest;
    if (include_timing) out << "," << absl::StrFormat("%.3f", r.elapsed_ms);
    if (!config_digest.empty()) out << "," << config_digest;
    out << "\n";
  }
  if (!out) return DataError(absl::StrCat("write failed for '", path, "'"));
  return absl::OkStatus();
}

absl::Status SaveFederationCheckpoint(const FederationResult& result, uint64_t seed,
                                      const std::string& dir, const std::string& config_digest) {
  for (size_t k = 0; k < result.client_private.size(); ++k) {
    FEDAUDIT_ASSIGN_OR_RETURN(aen::AenParams model, result.ModelForClient(k));
    FEDAUDIT_RETURN_IF_ERROR(aen::SaveCheckpoint(
        {std::move(model), result.split, seed, config_digest},
        (std::filesystem::path(dir) / absl::StrCat("client_", k)).string()));
  }
  return absl::OkStatus();
}

}  // namespace fedaudit::fed
