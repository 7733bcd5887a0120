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

#include <vector>

#include "benchmark/benchmark.h"
#include "fedaudit/aen/loss.h"
#include "fedaudit/aen/model.h"
#include "fedaudit/data/encoding.h"
#include "fedaudit/data/synthetic.h"
#include "fedaudit/dp/dp.h"
#include "fedaudit/eval/metrics.h"
#include "fedaudit/nn/backprop.h"
#include "fedaudit/nn/layer.h"
#include "fedaudit/nn/rng.h"

namespace fedaudit {
namespace {

// Encoded default synthetic table: 8000 rows.
struct Workload {
  data::EncodedDataset encoded;
  aen::AenParams params;
  aen::LossSpec spec;
};

const Workload& GetWorkload() {
  static const Workload* w = [] {
    auto* out = new Workload;
    const auto raw = data::GenerateSynthetic(data::SyntheticSpec{}, 1);
    out->encoded = *data::Encode(raw, raw.schema);
    out->params = *aen::BuildAen(out->encoded.input_dim(), 1);
    out->spec.column_map = out->encoded.column_map;
    return out;
  }();
  return *w;
}

nn::Tensor2 Batch(size_t rows) {
  const auto& w = GetWorkload();
  std::vector<size_t> idx(rows);
  for (size_t i = 0; i < rows; ++i) idx[i] = (i * 7919) % w.encoded.size();
  return w.encoded.matrix.GatherRows(idx);
}

void BM_Predict(benchmark::State& state) {
  const auto& w = GetWorkload();
  const nn::Tensor2 batch = Batch(state.range(0));
  for (auto _ : state) {
    auto out = nn::Predict(batch, w.params.layers);
    benchmark::DoNotOptimize(out);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Predict)->Arg(32)->Arg(256);

void BM_AccumulateGradients(benchmark::State& state) {
  const auto& w = GetWorkload();
  const nn::Tensor2 batch = Batch(state.range(0));
  const aen::ReconstructionLoss loss(w.spec);
  for (auto _ : state) {
    auto g = nn::AccumulateGradients(batch, batch, w.params.layers, loss);
    benchmark::DoNotOptimize(g);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_AccumulateGradients)->Arg(32)->Arg(64);

void BM_PrivateBatchGradient(benchmark::State& state) {
  const auto& w = GetWorkload();
  const nn::Tensor2 batch = Batch(32);
  const aen::ReconstructionLoss loss(w.spec);
  const dp::DpConfig cfg{1.0, 0.1, true};
  nn::Rng rng(3);
  for (auto _ : state) {
    auto g = dp::PrivateBatchGradient(batch, batch, w.params.layers, loss, cfg, rng);
    benchmark::DoNotOptimize(g);
  }
  state.SetItemsProcessed(state.iterations() * 32);
}
BENCHMARK(BM_PrivateBatchGradient);

void BM_ClipFlat(benchmark::State& state) {
  const auto& w = GetWorkload();
  const aen::ReconstructionLoss loss(w.spec);
  auto per_sample = *nn::PerSampleGradients(Batch(32), Batch(32), w.params.layers, loss);
  for (auto _ : state) {
    auto clipped = dp::ClipFlat(per_sample, 0.01);
    benchmark::DoNotOptimize(clipped);
  }
  state.SetItemsProcessed(state.iterations() * 32);
}
BENCHMARK(BM_ClipFlat);

void BM_ScoreDataset(benchmark::State& state) {
  const auto& w = GetWorkload();
  for (auto _ : state) {
    auto scores = aen::ScoreDataset(w.encoded, w.params, w.spec);
    benchmark::DoNotOptimize(scores);
  }
  state.SetItemsProcessed(state.iterations() * w.encoded.size());
}
BENCHMARK(BM_ScoreDataset)->Unit(benchmark::kMillisecond);

void BM_AveragePrecision(benchmark::State& state) {
  const size_t n = state.range(0);
  nn::Rng rng(5);
  std::vector<double> scores(n);
  std::vector<bool> positives(n);
  for (size_t i = 0; i < n; ++i) {
    scores[i] = rng.Uniform(0.0, 1.0);
    positives[i] = i % 97 == 0;
  }
  for (auto _ : state) {
    auto ap = eval::AveragePrecision(scores, positives);
    benchmark::DoNotOptimize(ap);
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_AveragePrecision)->Arg(1000)->Arg(100000);

}  // namespace
}  // namespace fedaudit

BENCHMARK_MAIN();
