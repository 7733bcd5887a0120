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

#include "fedaudit/experiment/runner.h"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <mutex>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "fedaudit/aen/checkpoint.h"
#include "fedaudit/data/anomalies.h"
#include "fedaudit/data/csv.h"
#include "fedaudit/data/encoding.h"
#include "fedaudit/data/partition.h"
#include "fedaudit/data/synthetic.h"
#include "fedaudit/errors.h"
#include "fedaudit/fed/federation.h"
#include "fedaudit/status_macros.h"
#include "fedaudit/util/parallel.h"
#include "json.hpp"

namespace fedaudit::experiment {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr int kResultFormatVersion = 1;

json OptionalJson(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

// Shortest text that parses back to the same double.
std::string ShortestDouble(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

std::string OptionalCsv(const std::optional<double>& v) {
  return v ? ShortestDouble(*v) : std::string();
}

json MetricJson(const MetricSummary& m) {
  return {{"mean", OptionalJson(m.mean)}, {"std", OptionalJson(m.std)}, {"n", m.n}};
}

absl::Status WriteText(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) return DataError(absl::StrCat("cannot write '", path, "'"));
  return absl::OkStatus();
}

absl::Status MakeDirs(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) return DataError(absl::StrCat("cannot create '", dir, "': ", ec.message()));
  return absl::OkStatus();
}

absl::Status WithSeed(const absl::Status& s, uint64_t seed) {
  return absl::Status(s.code(), absl::StrCat("seed ", seed, ": ", s.message()));
}

std::string SeedDir(uint64_t seed) { return absl::StrCat("seed_", seed); }

// Matrix and labels scored for a run under `scope`.
struct ScoringSet {
  nn::Tensor2 matrix;
  std::vector<data::Label> labels;
};

ScoringSet MakeScoringSet(const data::PreparedDataset& prepared, EvalScope scope) {
  if (scope == EvalScope::kAll) return {prepared.encoded.matrix, prepared.encoded.labels};
  return {data::PartitionMatrix(prepared.encoded, prepared.plan, 0),
          data::PartitionLabels(prepared.encoded, prepared.plan, 0)};
}

void Finish(RunResult& result) {
  std::vector<std::optional<double>> all, global, local;
  for (const SeedResult& s : result.seeds) {
    all.push_back(s.report.ap_all);
    global.push_back(s.report.ap_global);
    local.push_back(s.report.ap_local);
  }
  result.ap_all = SummarizeMetric(all);
  result.ap_global = SummarizeMetric(global);
  result.ap_local = SummarizeMetric(local);
}

}  // namespace

absl::StatusOr<data::PreparedDataset> PrepareData(const ExperimentConfig& config) {
  FEDAUDIT_RETURN_IF_ERROR(ValidateConfig(config));
  const DatasetSection& d = config.dataset;
  data::RawDataset raw;
  if (d.csv_path.empty()) {
    data::SyntheticSpec spec;
    spec.records = d.synthetic_records;
    spec.cardinalities = d.synthetic_cardinalities;
    spec.patterns = d.synthetic_patterns;
    spec.noise = d.synthetic_noise;
    raw = data::GenerateSynthetic(spec, d.data_seed);
  } else {
    FEDAUDIT_ASSIGN_OR_RETURN(raw,
                              data::LoadCsv(d.csv_path, {d.categorical, d.numeric, d.department}));
  }
  FEDAUDIT_ASSIGN_OR_RETURN(
      raw, data::InjectAnomalies(raw, config.anomalies.n_global, config.anomalies.n_local,
                                 d.data_seed));
  data::PreparedDataset prepared;
  prepared.schema = raw.schema;
  FEDAUDIT_ASSIGN_OR_RETURN(prepared.encoded, data::Encode(raw, raw.schema));
  FEDAUDIT_ASSIGN_OR_RETURN(
      prepared.plan,
      data::Partition(raw, config.federation.mode, config.federation.gamma, d.data_seed));
  prepared.config_digest = DataDigest(config);
  return prepared;
}

PrepareSummary Summarize(const data::PreparedDataset& prepared) {
  PrepareSummary s;
  s.records = prepared.encoded.size();
  s.categorical = prepared.schema.categorical.size();
  s.numeric = prepared.schema.numeric.size();
  s.encoded_dim = prepared.encoded.input_dim();
  s.partition_sizes = prepared.plan.Sizes();
  for (data::Label l : prepared.encoded.labels) {
    if (l == data::Label::kGlobalAnomaly) ++s.n_global;
    if (l == data::Label::kLocalAnomaly) ++s.n_local;
  }
  s.data_digest = prepared.config_digest;
  return s;
}

std::string PrepareSummaryJson(const PrepareSummary& s) {
  return json{{"N", s.records},
              {"M", s.categorical},
              {"K", s.numeric},
              {"D_enc", s.encoded_dim},
              {"partition_sizes", s.partition_sizes},
              {"n_global", s.n_global},
              {"n_local", s.n_local},
              {"data_digest", s.data_digest},
              {"reused", s.reused}}
      .dump();
}

std::string PrepareSummaryCsv(const PrepareSummary& s) {
  return absl::StrCat("N,M,K,D_enc,partition_sizes,n_global,n_local,data_digest\n", s.records,
                      ",", s.categorical, ",", s.numeric, ",", s.encoded_dim, ",",
                      absl::StrJoin(s.partition_sizes, ";"), ",", s.n_global, ",", s.n_local,
                      ",", s.data_digest, "\n");
}

std::string PreparedDir(const std::string& out_dir) {
  return (fs::path(out_dir) / "prepared").string();
}

absl::StatusOr<PrepareSummary> RunPrepare(const ExperimentConfig& config,
                                          const std::string& out_dir) {
  FEDAUDIT_ASSIGN_OR_RETURN(data::PreparedDataset prepared, PrepareData(config));
  FEDAUDIT_RETURN_IF_ERROR(data::SavePrepared(prepared, PreparedDir(out_dir)));
  return Summarize(prepared);
}

absl::StatusOr<data::PreparedDataset> LoadOrPrepare(const ExperimentConfig& config,
                                                    const std::string& out_dir, bool* reused) {
  if (reused != nullptr) *reused = false;
  const std::string dir = PreparedDir(out_dir);
  if (fs::exists(fs::path(dir) / data::kManifestFile)) {
    auto loaded = data::LoadPrepared(dir);
    if (loaded.ok() && loaded->config_digest == DataDigest(config)) {
      if (reused != nullptr) *reused = true;
      return loaded;
    }
  }
  FEDAUDIT_ASSIGN_OR_RETURN(data::PreparedDataset prepared, PrepareData(config));
  FEDAUDIT_RETURN_IF_ERROR(data::SavePrepared(prepared, dir));
  return prepared;
}

MetricSummary SummarizeMetric(const std::vector<std::optional<double>>& values) {
  MetricSummary m;
  double sum = 0.0;
  for (const auto& v : values) {
    if (!v) continue;
    sum += *v;
    ++m.n;
  }
  if (m.n == 0) return m;
  const double mean = sum / static_cast<double>(m.n);
  m.mean = mean;
  if (m.n >= 2) {
    double ss = 0.0;
    for (const auto& v : values) {
      if (v) ss += (*v - mean) * (*v - mean);
    }
    m.std = std::sqrt(ss / static_cast<double>(m.n - 1));
  }
  return m;
}

aen::LossSpec MakeLossSpec(const ExperimentConfig& config, const data::EncodedDataset& encoded) {
  aen::LossSpec spec;
  spec.vartheta = config.loss.vartheta;
  spec.clamp_epsilon = config.loss.clamp_epsilon;
  spec.column_map = encoded.column_map;
  return spec;
}

absl::StatusOr<RunResult> TrainOnPrepared(const ExperimentConfig& config,
                                          const data::PreparedDataset& prepared,
                                          const std::string& run_dir,
                                          const RunOptions& options) {
  FEDAUDIT_RETURN_IF_ERROR(ValidateConfig(config));
  if (prepared.plan.gamma != config.federation.gamma) {
    return ConfigError(absl::StrCat("prepared data has ", prepared.plan.gamma,
                                    " partitions, config asks for ", config.federation.gamma));
  }
  FEDAUDIT_RETURN_IF_ERROR(MakeDirs(run_dir));
  const std::string digest = ConfigDigest(config);
  const aen::LossSpec spec = MakeLossSpec(config, prepared.encoded);
  std::vector<nn::Tensor2> partitions;
  for (size_t k = 0; k < prepared.plan.gamma; ++k) {
    partitions.push_back(data::PartitionMatrix(prepared.encoded, prepared.plan, k));
  }
  const ScoringSet scoring = MakeScoringSet(prepared, config.eval.scope);

  std::mutex log_mu;
  auto log = [&](const std::string& line) {
    if (options.log == nullptr) return;
    std::lock_guard<std::mutex> lock(log_mu);
    *options.log << line << std::endl;
  };

  std::vector<absl::StatusOr<SeedResult>> outcomes(config.seeds.size(),
                                                   absl::UnknownError("not run"));
  auto run_seed = [&](size_t i) -> absl::StatusOr<SeedResult> {
    const uint64_t seed = config.seeds[i];
    const std::string seed_dir = (fs::path(run_dir) / SeedDir(seed)).string();
    FEDAUDIT_RETURN_IF_ERROR(MakeDirs(seed_dir));
    fed::FederationConfig fcfg = ToFederationConfig(config, seed);
    fcfg.checkpoint_dir = (fs::path(seed_dir) / "checkpoints").string();
    FEDAUDIT_ASSIGN_OR_RETURN(
        fed::FederationResult run,
        fed::RunFederation(fcfg, partitions, spec, [&](const fed::RoundRecord& r) {
          log(absl::StrFormat("seed %d round %d/%d loss %.6f", seed, r.round, fcfg.rounds,
                              r.mean_loss));
        }));
    FEDAUDIT_ASSIGN_OR_RETURN(aen::AenParams model, run.ModelForClient(0));
    FEDAUDIT_ASSIGN_OR_RETURN(std::vector<double> scores,
                              aen::ScoreMatrix(scoring.matrix, model, spec));
    SeedResult out;
    out.seed = seed;
    FEDAUDIT_ASSIGN_OR_RETURN(
        out.report, eval::Evaluate(scores, scoring.labels, {config.eval.other_class, seed}));
    out.rounds_run = run.history.size();
    out.early_stopped = run.early_stopped;
    out.final_loss = run.history.back().mean_loss;
    out.history_path = (fs::path(SeedDir(seed)) / "history.csv").string();
    out.checkpoint_path = (fs::path(SeedDir(seed)) / "checkpoints" / "final").string();
    FEDAUDIT_RETURN_IF_ERROR(fed::WriteHistoryCsv(
        run.history, (fs::path(run_dir) / out.history_path).string(), true, digest));
    FEDAUDIT_RETURN_IF_ERROR(WriteText((fs::path(seed_dir) / "report.json").string(),
                                       eval::EvalReportJson(out.report) + "\n"));
    if (options.write_curves) {
      FEDAUDIT_RETURN_IF_ERROR(
          eval::WritePrCurvesCsv(out.report, (fs::path(seed_dir) / "pr_curves.csv").string()));
    }
    log(absl::StrFormat("seed %d done: AP_all %s AP_global %s AP_local %s", seed,
                        OptionalCsv(out.report.ap_all), OptionalCsv(out.report.ap_global),
                        OptionalCsv(out.report.ap_local)));
    return out;
  };
  util::ParallelFor(config.seeds.size(), options.jobs,
                    [&](size_t i) { outcomes[i] = run_seed(i); });

  RunResult result;
  result.config_digest = digest;
  result.data_digest = prepared.config_digest;
  result.scope = config.eval.scope;
  for (size_t i = 0; i < outcomes.size(); ++i) {
    if (!outcomes[i].ok()) return WithSeed(outcomes[i].status(), config.seeds[i]);
    result.seeds.push_back(std::move(*outcomes[i]));
  }
  Finish(result);
  FEDAUDIT_RETURN_IF_ERROR(
      WriteText((fs::path(run_dir) / "run_result.json").string(), RunResultJson(result) + "\n"));
  return result;
}

absl::StatusOr<RunResult> EvaluateCheckpoints(const ExperimentConfig& config,
                                              const data::PreparedDataset& prepared,
                                              const std::string& run_dir) {
  FEDAUDIT_RETURN_IF_ERROR(ValidateConfig(config));
  const aen::LossSpec spec = MakeLossSpec(config, prepared.encoded);
  const ScoringSet scoring = MakeScoringSet(prepared, config.eval.scope);
  RunResult result;
  result.config_digest = ConfigDigest(config);
  result.data_digest = prepared.config_digest;
  result.scope = config.eval.scope;
  for (uint64_t seed : config.seeds) {
    SeedResult out;
    out.seed = seed;
    out.checkpoint_path = (fs::path(SeedDir(seed)) / "checkpoints" / "final").string();
    auto ck = aen::LoadCheckpoint((fs::path(run_dir) / out.checkpoint_path / "client_0").string());
    if (!ck.ok()) return WithSeed(ck.status(), seed);
    auto scores = aen::ScoreMatrix(scoring.matrix, ck->params, spec);
    if (!scores.ok()) return WithSeed(scores.status(), seed);
    auto report = eval::Evaluate(*scores, scoring.labels, {config.eval.other_class, seed});
    if (!report.ok()) return WithSeed(report.status(), seed);
    out.report = std::move(*report);
    result.seeds.push_back(std::move(out));
  }
  Finish(result);
  return result;
}

std::string RunResultJson(const RunResult& result) {
  json seeds = json::array();
  for (const SeedResult& s : result.seeds) {
    seeds.push_back({{"seed", s.seed},
                     {"report", json::parse(eval::EvalReportJson(s.report))},
                     {"rounds_run", s.rounds_run},
                     {"early_stopped", s.early_stopped},
                     {"final_loss", s.final_loss},
                     {"history", s.history_path},
                     {"checkpoint", s.checkpoint_path}});
  }
  json out = {{"format_version", kResultFormatVersion},
              {"config_digest", result.config_digest},
              {"data_digest", result.data_digest},
              {"eval_scope", std::string(EvalScopeName(result.scope))},
              {"seeds", seeds},
              {"summary",
               {{"ap_all", MetricJson(result.ap_all)},
                {"ap_global", MetricJson(result.ap_global)},
                {"ap_local", MetricJson(result.ap_local)}}}};
  return out.dump(1);
}

std::string RunResultCsv(const RunResult& result) {
  std::string out = "row,seed,ap_all,ap_global,ap_local,config_digest\n";
  for (const SeedResult& s : result.seeds) {
    absl::StrAppend(&out, "seed,", s.seed, ",", OptionalCsv(s.report.ap_all), ",",
                    OptionalCsv(s.report.ap_global), ",", OptionalCsv(s.report.ap_local), ",",
                    result.config_digest, "\n");
  }
  absl::StrAppend(&out, "mean,,", OptionalCsv(result.ap_all.mean), ",",
                  OptionalCsv(result.ap_global.mean), ",", OptionalCsv(result.ap_local.mean), ",",
                  result.config_digest, "\n");
  absl::StrAppend(&out, "std,,", OptionalCsv(result.ap_all.std), ",",
                  OptionalCsv(result.ap_global.std), ",", OptionalCsv(result.ap_local.std), ",",
                  result.config_digest, "\n");
  return out;
}

std::string_view SweepKindName(SweepKind kind) {
  switch (kind) {
    case SweepKind::kDp:
      return "dp";
    case SweepKind::kCut:
      return "cut";
    case SweepKind::kLambda:
      return "lambda";
  }
  return "";
}

absl::StatusOr<SweepKind> ParseSweepKind(std::string_view name) {
  if (name == "dp") return SweepKind::kDp;
  if (name == "cut") return SweepKind::kCut;
  if (name == "lambda") return SweepKind::kLambda;
  return ConfigError(absl::StrCat("unknown sweep grid '", std::string(name), "'"));
}

absl::StatusOr<std::vector<SweepCell>> BuildSweepCells(const ExperimentConfig& config,
                                                       SweepKind kind, bool keep_config) {
  std::vector<SweepCell> cells;
  const SweepSection& s = config.sweep;
  switch (kind) {
    case SweepKind::kDp: {
      if (s.grad_max.empty() || s.kappa.empty()) {
        return ConfigError("dp sweep needs non-empty sweep.grad_max and sweep.kappa");
      }
      ExperimentConfig base = config;
      base.dp.enabled = true;
      if (!keep_config) {
        base.federation.lambda = 8;
        base.split = {1, 1};
      }
      for (double g : s.grad_max) {
        for (double k : s.kappa) {
          SweepCell cell{absl::StrCat("grad_max=", g, "_kappa=", k), base};
          cell.config.dp.grad_max = g;
          cell.config.dp.kappa = k;
          cells.push_back(std::move(cell));
        }
      }
      break;
    }
    case SweepKind::kCut: {
      if (s.cut.empty()) return ConfigError("cut sweep needs non-empty sweep.cut");
      ExperimentConfig base = config;
      if (!keep_config) base.dp = {true, 100.0, 0.0};
      for (int c : s.cut) {
        SweepCell cell{absl::StrCat("cut=", c), base};
        cell.config.split = {c, c};
        cells.push_back(std::move(cell));
      }
      break;
    }
    case SweepKind::kLambda: {
      if (s.lambda.empty()) return ConfigError("lambda sweep needs non-empty sweep.lambda");
      for (size_t l : s.lambda) {
        SweepCell cell{absl::StrCat("lambda=", l), config};
        cell.config.federation.lambda = l;
        cells.push_back(std::move(cell));
      }
      break;
    }
  }
  return cells;
}

size_t SweepResult::failures() const {
  size_t n = 0;
  for (const auto& r : runs) n += r.ok() ? 0 : 1;
  return n;
}

SweepResult RunSweep(const std::vector<SweepCell>& cells, const data::PreparedDataset& prepared,
                     const std::string& out_dir, const RunOptions& options) {
  SweepResult result;
  result.cells = cells;
  result.runs.assign(cells.size(), absl::UnknownError("not run"));
  RunOptions inner = options;
  inner.jobs = 1;
  util::ParallelFor(cells.size(), options.jobs, [&](size_t i) {
    const std::string dir = (fs::path(out_dir) / "cells" / cells[i].name).string();
    result.runs[i] = TrainOnPrepared(cells[i].config, prepared, dir, inner);
  });
  (void)WriteText((fs::path(out_dir) / "sweep.csv").string(), SweepCsv(result));
  return result;
}

std::string SweepCsv(const SweepResult& result) {
  std::string out =
      "cell,grad_max,kappa,dp_enabled,cut_encoder,cut_decoder,lambda,row,seed,ap_all,"
      "ap_global,ap_local,status,config_digest\n";
  for (size_t i = 0; i < result.cells.size(); ++i) {
    const ExperimentConfig& c = result.cells[i].config;
    const std::string prefix = absl::StrCat(
        result.cells[i].name, ",", ShortestDouble(c.dp.grad_max), ",",
        ShortestDouble(c.dp.kappa), ",", c.dp.enabled ? "true" : "false", ",",
        c.split.cut_encoder, ",", c.split.cut_decoder, ",", c.federation.lambda, ",");
    const std::string digest = ConfigDigest(c);
    if (!result.runs[i].ok()) {
      absl::StrAppend(&out, prefix, "error,,,,,",
                      data::QuoteCsvField(std::string(result.runs[i].status().message())), ",",
                      digest, "\n");
      continue;
    }
    const RunResult& r = *result.runs[i];
    for (const SeedResult& s : r.seeds) {
      absl::StrAppend(&out, prefix, "seed,", s.seed, ",", OptionalCsv(s.report.ap_all), ",",
                      OptionalCsv(s.report.ap_global), ",", OptionalCsv(s.report.ap_local),
                      ",ok,", digest, "\n");
    }
    absl::StrAppend(&out, prefix, "mean,,", OptionalCsv(r.ap_all.mean), ",",
                    OptionalCsv(r.ap_global.mean), ",", OptionalCsv(r.ap_local.mean), ",ok,",
                    digest, "\n");
    absl::StrAppend(&out, prefix, "std,,", OptionalCsv(r.ap_all.std), ",",
                    OptionalCsv(r.ap_global.std), ",", OptionalCsv(r.ap_local.std), ",ok,",
                    digest, "\n");
  }
  return out;
}

}  // namespace fedaudit::experiment
