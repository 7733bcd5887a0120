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
#include <set>
#include <type_traits>
#include <vector>

#include "fedaudit/aen/checkpoint.h"
#include "fedaudit/data/encoding.h"
#include "fedaudit/data/partition.h"
#include "fedaudit/data/synthetic.h"
#include "fedaudit/fed/federation.h"
#include "fedaudit/nn/backprop.h"
#include "gtest/gtest.h"
#include "oracles/centralized_training.h"
#include "oracles/temp_dir.h"

namespace fedaudit::fed {
namespace {

aen::ParameterSubset Scalar(double v) {
  nn::LayerParams l;
  l.weights = nn::Tensor2::FromRows({{v}});
  l.bias = {v};
  return {{3}, {l}};
}

TEST(FedAvgTest, SingleClientIsIdentity) {
  const auto p = Scalar(0.123456789);
  auto r = FedAvg({p}, {17.0});
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(*r, p);
}

TEST(FedAvgTest, EqualWeightsMean) {
  auto r = FedAvg({Scalar(0.0), Scalar(2.0)}, {5.0, 5.0});
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r->layers[0].weights(0, 0), 1.0);
}

TEST(FedAvgTest, HandWeightedMean) {
  auto r = FedAvg({Scalar(6.0), Scalar(3.0), Scalar(2.0)}, {1.0, 2.0, 3.0});
  ASSERT_TRUE(r.ok());
  EXPECT_NEAR(r->layers[0].weights(0, 0), 3.0, 1e-15);
  EXPECT_NEAR(r->layers[0].bias[0], 3.0, 1e-15);
}

TEST(FedAvgTest, EqualWeightsMatchArithmeticMean) {
  nn::Rng rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    const size_t k = 1 + rng.UniformIndex(8);
    std::vector<aen::ParameterSubset> ups;
    double sum = 0.0;
    for (size_t i = 0; i < k; ++i) {
      const double v = rng.Uniform(-1.0, 1.0);
      sum += v;
      ups.push_back(Scalar(v));
    }
    auto r = FedAvg(ups, std::vector<double>(k, 3.0));
    ASSERT_TRUE(r.ok());
    EXPECT_NEAR(r->layers[0].weights(0, 0), sum / k, 1e-15);
  }
}

TEST(FedAvgTest, Errors) {
  auto wide = Scalar(1.0);
  wide.layers[0].weights = nn::Tensor2(1, 2);
  auto r = FedAvg({Scalar(1.0), wide}, {1.0, 1.0});
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.status().code(), absl::StatusCode::kAborted);
  EXPECT_FALSE(FedAvg({}, {}).ok());
  EXPECT_FALSE(FedAvg({Scalar(1.0)}, {0.0}).ok());
  EXPECT_FALSE(FedAvg({Scalar(1.0)}, {1.0, 2.0}).ok());
}

struct FedFixture {
  std::vector<nn::Tensor2> partitions;
  aen::LossSpec spec;
};

FedFixture MakeSetup(size_t records, size_t gamma, uint64_t seed = 4) {
  data::SyntheticSpec s;
  s.records = records;
  s.cardinalities = {4, 5, 6};
  const auto raw = data::GenerateSynthetic(s, seed);
  const auto enc = *data::Encode(raw, raw.schema);
  const auto plan = *data::Partition(raw, data::PartitionMode::kIid, gamma, seed);
  FedFixture out;
  for (size_t k = 0; k < gamma; ++k) out.partitions.push_back(data::PartitionMatrix(enc, plan, k));
  out.spec.column_map = enc.column_map;
  return out;
}

FederationConfig SmallConfig(size_t gamma, size_t lambda) {
  FederationConfig cfg;
  cfg.gamma = gamma;
  cfg.lambda = lambda;
  cfg.rounds = 3;
  cfg.iterations = 4;
  cfg.batch_size = 8;
  cfg.seed = 21;
  cfg.dp = {1.0, 0.1, true};
  cfg.split = aen::SplitMask::Symmetric(1);
  return cfg;
}

TEST(ClientUpdateTest, ZeroIterationsReturnsCentralParams) {
  const FedFixture s = MakeSetup(60, 1);
  FederationConfig cfg = SmallConfig(1, 1);
  auto client = MakeClient(0, s.partitions[0], cfg);
  ASSERT_TRUE(client.ok());
  const auto init = *aen::BuildAen(s.partitions[0].cols(), 77);
  const auto central = aen::SplitParams(init, cfg.split)->public_part;
  cfg.iterations = 0;
  auto r = ClientUpdate(*client, central, 1, cfg, s.spec);
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r->public_params, central);
}

TEST(ClientUpdateTest, BatchLargerThanPartition) {
  const FedFixture s = MakeSetup(60, 1);
  FederationConfig cfg = SmallConfig(1, 1);
  cfg.batch_size = 50;
  const nn::Tensor2 tiny = s.partitions[0].GatherRows(std::vector<size_t>{0, 1, 2});
  auto client = MakeClient(0, tiny, cfg);
  ASSERT_TRUE(client.ok());
  const auto central = aen::SplitParams(*aen::BuildAen(tiny.cols(), 1), cfg.split)->public_part;
  auto r = ClientUpdate(*client, central, 1, cfg, s.spec);
  ASSERT_TRUE(r.ok()) << r.status();
  EXPECT_EQ(r->stats.iterations, 4u);
  EXPECT_EQ(r->stats.num_records, 3u);
}

TEST(ClientUpdateTest, EmptyPartitionRejected) {
  auto c = MakeClient(0, nn::Tensor2(0, 5), SmallConfig(1, 1));
  ASSERT_FALSE(c.ok());
  EXPECT_EQ(c.status().code(), absl::StatusCode::kAborted);
}

TEST(ClientUpdateTest, PrivateLayersAndMomentsPersist) {
  const FedFixture s = MakeSetup(80, 1);
  const FederationConfig cfg = SmallConfig(1, 1);
  auto client = *MakeClient(0, s.partitions[0], cfg);
  const auto before = client.private_params();
  const auto central = aen::SplitParams(*aen::BuildAen(s.partitions[0].cols(), 1), cfg.split)
                           ->public_part;
  auto r1 = ClientUpdate(client, central, 1, cfg, s.spec);
  ASSERT_TRUE(r1.ok());
  EXPECT_NE(client.private_params(), before);
  EXPECT_EQ(client.private_params().indices, (std::vector<size_t>{0, 15}));
  EXPECT_EQ(client.optimizer_steps(), 4);
  const auto after_one = client.private_params();
  ASSERT_TRUE(ClientUpdate(client, r1->public_params, 2, cfg, s.spec).ok());
  EXPECT_NE(client.private_params(), after_one);
  EXPECT_EQ(client.optimizer_steps(), 8);
}

// The orchestrator sees exactly two things per client: public layers and
// scalar loss statistics.
TEST(PrivacyBoundaryTest, UpdateCarriesOnlyPublicLayersAndScalars) {
  static_assert(std::is_aggregate_v<ClientUpdateResult>);
  static_assert(std::is_same_v<decltype(ClientUpdateResult::public_params), aen::ParameterSubset>);
  static_assert(std::is_same_v<decltype(ClientUpdateResult::stats), ClientLossStats>);
  static_assert(sizeof(ClientUpdateResult) ==
                sizeof(aen::ParameterSubset) + sizeof(ClientLossStats));
  static_assert(sizeof(ClientLossStats) == sizeof(double) + 2 * sizeof(size_t));
  ClientUpdateResult probe;
  auto& [layers, stats] = probe;
  auto& [mean_loss, iterations, records] = stats;
  static_assert(std::is_arithmetic_v<std::remove_reference_t<decltype(mean_loss)>>);
  static_assert(std::is_arithmetic_v<std::remove_reference_t<decltype(iterations)>>);
  static_assert(std::is_arithmetic_v<std::remove_reference_t<decltype(records)>>);
  (void)layers;

  const FedFixture s = MakeSetup(200, 2);
  FederationConfig cfg = SmallConfig(2, 2);
  cfg.split = aen::SplitMask{2, 3};
  auto client = *MakeClient(1, s.partitions[1], cfg);
  const auto central = aen::SplitParams(*aen::BuildAen(s.partitions[1].cols(), 1), cfg.split)
                           ->public_part;
  auto r = ClientUpdate(client, central, 1, cfg, s.spec);
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r->public_params.indices, aen::PublicLayerIndices(cfg.split));
  for (size_t l : r->public_params.indices) EXPECT_FALSE(aen::IsPrivateLayer(cfg.split, l));

  auto run = RunFederation(cfg, s.partitions, s.spec);
  ASSERT_TRUE(run.ok());
  EXPECT_EQ(run->central_public.indices, aen::PublicLayerIndices(cfg.split));
}

TEST(RunFederationTest, DegenerateFederationEqualsCentralizedTraining) {
  const FedFixture s = MakeSetup(150, 1);
  FederationConfig cfg = SmallConfig(1, 1);
  cfg.rounds = 3;
  cfg.iterations = 6;
  cfg.dp.enabled = false;
  cfg.split = aen::SplitMask::Symmetric(0);
  auto run = RunFederation(cfg, s.partitions, s.spec);
  ASSERT_TRUE(run.ok()) << run.status();
  auto model = run->ModelForClient(0);
  ASSERT_TRUE(model.ok());
  EXPECT_EQ(*model, ::fedaudit::testing::CentralizedTraining(s.partitions[0], s.spec, cfg));
}

void ExpectSameRun(const FederationResult& a, const FederationResult& b) {
  EXPECT_EQ(a.central_public, b.central_public);
  EXPECT_EQ(a.client_private, b.client_private);
  ASSERT_EQ(a.history.size(), b.history.size());
  for (size_t r = 0; r < a.history.size(); ++r) {
    EXPECT_EQ(a.history[r].clients, b.history[r].clients);
    EXPECT_EQ(a.history[r].client_losses, b.history[r].client_losses);
    EXPECT_EQ(a.history[r].mean_loss, b.history[r].mean_loss);
    EXPECT_EQ(a.history[r].public_digest, b.history[r].public_digest);
  }
}

TEST(RunFederationTest, RepeatRunsAreBitwiseIdentical) {
  const FedFixture s = MakeSetup(300, 3);
  const FederationConfig cfg = SmallConfig(3, 2);
  auto a = RunFederation(cfg, s.partitions, s.spec);
  auto b = RunFederation(cfg, s.partitions, s.spec);
  ASSERT_TRUE(a.ok() && b.ok());
  ExpectSameRun(*a, *b);
}

TEST(RunFederationTest, ParallelClientsMatchSequential) {
  const FedFixture s = MakeSetup(300, 4);
  FederationConfig cfg = SmallConfig(4, 4);
  auto seq = RunFederation(cfg, s.partitions, s.spec);
  cfg.threads = 4;
  auto par = RunFederation(cfg, s.partitions, s.spec);
  ASSERT_TRUE(seq.ok() && par.ok());
  ExpectSameRun(*seq, *par);
}

TEST(RunFederationTest, RoundBookkeeping) {
  const FedFixture s = MakeSetup(400, 5);
  FederationConfig cfg = SmallConfig(5, 3);
  cfg.rounds = 6;
  std::vector<size_t> seen;
  auto run = RunFederation(cfg, s.partitions, s.spec,
                           [&](const RoundRecord& r) { seen.push_back(r.round); });
  ASSERT_TRUE(run.ok());
  ASSERT_EQ(run->history.size(), 6u);
  for (size_t r = 0; r < 6; ++r) {
    EXPECT_EQ(run->history[r].round, r + 1);
    EXPECT_EQ(run->history[r].clients.size(), 3u);
    EXPECT_EQ(std::set<size_t>(run->history[r].clients.begin(), run->history[r].clients.end())
                  .size(),
              3u);
    EXPECT_EQ(run->history[r].public_digest.size(), 16u);
  }
  EXPECT_EQ(seen, (std::vector<size_t>{1, 2, 3, 4, 5, 6}));
}

TEST(RunFederationTest, TrainingReducesLoss) {
  const FedFixture s = MakeSetup(400, 2);
  FederationConfig cfg = SmallConfig(2, 2);
  cfg.rounds = 15;
  cfg.iterations = 20;
  cfg.dp.enabled = false;
  cfg.early_stopping.enabled = false;
  auto run = RunFederation(cfg, s.partitions, s.spec);
  ASSERT_TRUE(run.ok());
  EXPECT_LT(run->history.back().mean_loss, run->history.front().mean_loss);
}

TEST(SelectClientsTest, SizeUniquenessAndDeterminism) {
  FederationConfig cfg;
  cfg.gamma = 8;
  cfg.lambda = 3;
  cfg.seed = 5;
  std::set<size_t> ever;
  for (size_t round = 1; round <= 50; ++round) {
    const auto ids = SelectClients(cfg, round);
    ASSERT_EQ(ids.size(), 3u);
    EXPECT_TRUE(std::is_sorted(ids.begin(), ids.end()));
    EXPECT_EQ(std::set<size_t>(ids.begin(), ids.end()).size(), 3u);
    EXPECT_EQ(ids, SelectClients(cfg, round));
    ever.insert(ids.begin(), ids.end());
  }
  EXPECT_EQ(ever.size(), 8u);
  cfg.lambda = 8;
  EXPECT_EQ(SelectClients(cfg, 1), (std::vector<size_t>{0, 1, 2, 3, 4, 5, 6, 7}));
}

TEST(EarlyStopTrackerTest, PatienceOnRelativeImprovement) {
  EarlyStopTracker t({true, 3, 1e-4});
  EXPECT_FALSE(t.Update(1.0));
  EXPECT_FALSE(t.Update(0.99995));  // below the relative threshold
  EXPECT_FALSE(t.Update(1.2));
  EXPECT_FALSE(t.Update(0.5));      // resets
  EXPECT_FALSE(t.Update(0.5));
  EXPECT_FALSE(t.Update(0.49999));
  EXPECT_TRUE(t.Update(0.6));
  EarlyStopTracker off({false, 1, 0.0});
  for (int i = 0; i < 5; ++i) EXPECT_FALSE(off.Update(1.0));
}

TEST(RunFederationTest, EarlyStoppingCutsRounds) {
  const FedFixture s = MakeSetup(100, 1);
  FederationConfig cfg = SmallConfig(1, 1);
  cfg.rounds = 10;
  cfg.early_stopping = {true, 2, 10.0};  // nothing can improve by 1000%
  auto run = RunFederation(cfg, s.partitions, s.spec);
  ASSERT_TRUE(run.ok());
  EXPECT_TRUE(run->early_stopped);
  EXPECT_EQ(run->history.size(), 3u);
}

TEST(RunFederationTest, ConfigAndPartitionErrors) {
  const FedFixture s = MakeSetup(100, 2);
  FederationConfig cfg = SmallConfig(2, 3);
  EXPECT_EQ(RunFederation(cfg, s.partitions, s.spec).status().code(),
            absl::StatusCode::kInvalidArgument);
  cfg = SmallConfig(3, 2);
  EXPECT_EQ(RunFederation(cfg, s.partitions, s.spec).status().code(),
            absl::StatusCode::kAborted);
  cfg = SmallConfig(2, 2);
  cfg.iterations = 0;
  EXPECT_FALSE(RunFederation(cfg, s.partitions, s.spec).ok());
}

TEST(RunFederationTest, ClientErrorsNameTheClient) {
  FedFixture s = MakeSetup(100, 2);
  for (double& v : s.partitions[1].values()) v = std::nan("");
  auto run = RunFederation(SmallConfig(2, 2), s.partitions, s.spec);
  ASSERT_FALSE(run.ok());
  EXPECT_EQ(run.status().code(), absl::StatusCode::kOutOfRange);
  EXPECT_NE(run.status().message().find("client 1"), std::string::npos);
}

TEST(RunFederationTest, HistoryCsvAndCheckpoints) {
  ::fedaudit::testing::TempDir dir;
  const FedFixture s = MakeSetup(120, 2);
  FederationConfig cfg = SmallConfig(2, 2);
  cfg.rounds = 4;
  cfg.checkpoint_every = 2;
  cfg.checkpoint_dir = dir.File("ck");
  auto run = RunFederation(cfg, s.partitions, s.spec);
  ASSERT_TRUE(run.ok());
  ASSERT_TRUE(WriteHistoryCsv(run->history, dir.File("h.csv")).ok());
  ASSERT_TRUE(WriteHistoryCsv(run->history, dir.File("h2.csv"), false).ok());
  const std::string csv = ::fedaudit::testing::ReadFile(dir.File("h.csv"));
  EXPECT_EQ(csv.rfind("round,client_ids,client_losses,mean_loss,public_digest,elapsed_ms\n", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
  const std::string bare = ::fedaudit::testing::ReadFile(dir.File("h2.csv"));
  EXPECT_EQ(bare.find("elapsed_ms"), std::string::npos);

  EXPECT_TRUE(std::filesystem::exists(dir.File("ck/round_0002/client_1/model.json")));
  for (size_t k = 0; k < 2; ++k) {
    auto ck = aen::LoadCheckpoint(dir.File("ck/final/client_" + std::to_string(k)));
    ASSERT_TRUE(ck.ok()) << ck.status();
    EXPECT_EQ(ck->params, *run->ModelForClient(k));
    EXPECT_EQ(ck->mask, cfg.split);
  }
}

}  // namespace
}  // namespace fedaudit::fed
