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

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "acceptance/criteria.h"
#include "cli.h"
#include "fedaudit/aen/loss.h"
#include "fedaudit/aen/model.h"
#include "fedaudit/aen/split.h"
#include "fedaudit/data/anomalies.h"
#include "fedaudit/data/encoding.h"
#include "fedaudit/data/partition.h"
#include "fedaudit/data/synthetic.h"
#include "fedaudit/dp/dp.h"
#include "fedaudit/eval/metrics.h"
#include "fedaudit/fed/federation.h"
#include "fedaudit/nn/backprop.h"
#include "fedaudit/util/fnv.h"
#include "oracles/ap_bruteforce.h"
#include "oracles/centralized_training.h"
#include "oracles/finite_difference.h"
#include "oracles/frequency_scan.h"
#include "oracles/temp_dir.h"

namespace fedaudit::acceptance {
namespace {

namespace fs = std::filesystem;

Outcome Pass(std::string detail) { return {Verdict::kPass, std::move(detail)}; }
Outcome Fail(std::string detail) { return {Verdict::kFail, std::move(detail)}; }

// Loss spec over `width` outputs: categorical slices of width 1..3, then one
// numeric column.
aen::LossSpec RandomSpec(size_t width, nn::Rng& rng) {
  aen::LossSpec spec;
  size_t offset = 0;
  while (offset + 1 < width) {
    const size_t w = std::min<size_t>(1 + rng.UniformIndex(3), width - 1 - offset);
    spec.column_map.push_back({absl::StrCat("c", offset), true, offset, w});
    offset += w;
  }
  spec.column_map.push_back({"n", false, offset, 1});
  return spec;
}

// One-hot categorical targets and a numeric target in [0, 1].
nn::Tensor2 TargetsFor(const aen::LossSpec& spec, size_t rows, nn::Rng& rng) {
  nn::Tensor2 t(rows, spec.column_map.back().offset + 1);
  for (size_t r = 0; r < rows; ++r) {
    for (const auto& s : spec.column_map) {
      if (s.categorical) {
        t(r, s.offset + rng.UniformIndex(s.width)) = 1.0;
      } else {
        t(r, s.offset) = rng.Uniform(0.0, 1.0);
      }
    }
  }
  return t;
}

}  // namespace

Outcome GradientOracle(const Context&) {
  nn::Rng rng(101);
  constexpr int kNets = 24;
  double worst = 0.0;
  for (int net_id = 0; net_id < kNets; ++net_id) {
    std::vector<size_t> widths = {3 + rng.UniformIndex(6)};
    const size_t depth = 2 + rng.UniformIndex(3);
    for (size_t l = 0; l + 1 < depth; ++l) widths.push_back(2 + rng.UniformIndex(6));
    widths.push_back(3 + rng.UniformIndex(5));
    const auto net = testing::RandomNet(widths, rng);
    const aen::LossSpec spec = RandomSpec(widths.back(), rng);
    const aen::ReconstructionLoss loss(spec);
    const nn::Tensor2 x = testing::RandomTensor(4, widths.front(), rng);
    const nn::Tensor2 t = TargetsFor(spec, 4, rng);
    auto grads = nn::PerSampleGradients(x, t, net, loss);
    if (!grads.ok()) return Fail(std::string(grads.status().message()));
    for (size_t b = 0; b < x.rows(); ++b) {
      const auto fd = testing::FiniteDifferenceGradient(net, x.row(b), t.row(b), loss, 1e-5);
      worst = std::max(worst, testing::MaxRelativeError((*grads)[b], fd));
    }
  }
  const std::string detail =
      absl::StrFormat("%d nets x 4 samples, max relative error %.3g (< 1e-4)", kNets, worst);
  return worst < 1e-4 ? Pass(detail) : Fail(detail);
}

Outcome FedAvgExactness(const Context&) {
  nn::Rng rng(202);
  constexpr int kTrials = 200;
  double worst = 0.0;
  for (int trial = 0; trial < kTrials; ++trial) {
    const size_t d = 3 + rng.UniformIndex(12);
    const auto mask = aen::SplitMask::Symmetric(static_cast<int>(rng.UniformIndex(8)));
    const size_t k = 1 + rng.UniformIndex(8);
    std::vector<aen::ParameterSubset> updates;
    std::vector<double> weights;
    for (size_t i = 0; i < k; ++i) {
      auto params = *aen::BuildAen(d, rng.NextU64());
      for (auto& l : params.layers) {
        for (double& v : l.weights.values()) v = rng.Uniform(-1.0, 1.0);
        for (double& v : l.bias) v = rng.Uniform(-1.0, 1.0);
      }
      updates.push_back(aen::SplitParams(params, mask)->public_part);
      weights.push_back(static_cast<double>(1 + rng.UniformIndex(5000)));
    }
    auto avg = fed::FedAvg(updates, weights);
    if (!avg.ok()) return Fail(std::string(avg.status().message()));
    long double total = 0;
    for (double w : weights) total += w;
    for (size_t l = 0; l < avg->layers.size(); ++l) {
      auto check = [&](auto get) {
        long double expect = 0;
        for (size_t i = 0; i < k; ++i) expect += weights[i] * get(updates[i].layers[l]);
        expect /= total;
        worst = std::max(worst, static_cast<double>(std::fabs(get(avg->layers[l]) - expect)));
      };
      for (size_t c = 0; c < avg->layers[l].weights.size(); ++c) {
        check([c](const nn::LayerParams& p) -> long double { return p.weights.values()[c]; });
      }
      for (size_t c = 0; c < avg->layers[l].bias.size(); ++c) {
        check([c](const nn::LayerParams& p) -> long double { return p.bias[c]; });
      }
    }
  }
  bool identity = true;
  for (int trial = 0; trial < 20; ++trial) {
    auto params = *aen::BuildAen(5 + trial, rng.NextU64());
    const auto part = aen::SplitParams(params, aen::SplitMask::Symmetric(trial % 9))->public_part;
    auto avg = fed::FedAvg(std::vector<aen::ParameterSubset>{part}, {rng.Uniform(1.0, 1e4)});
    identity = identity && avg.ok() && *avg == part;
  }
  const std::string detail = absl::StrFormat(
      "%d random aggregations, max coordinate error %.3g (< 1e-15); single-client identity %s",
      kTrials, worst, identity ? "exact" : "NOT exact");
  return worst < 1e-15 && identity ? Pass(detail) : Fail(detail);
}

Outcome DpMechanics(const Context&) {
  nn::Rng rng(303);
  // Clipping bound.
  constexpr int kSets = 10000;
  constexpr double kClipSlack = 1e-12;
  size_t violations = 0;
  double worst_ratio = 0.0;
  for (int set = 0; set < kSets; ++set) {
    nn::Gradients g;
    const size_t layers = 1 + rng.UniformIndex(3);
    const double scale = std::pow(10.0, rng.Uniform(-3.0, 3.0));
    for (size_t l = 0; l < layers; ++l) {
      nn::LayerGradient lg;
      lg.weights = testing::RandomTensor(1 + rng.UniformIndex(4), 1 + rng.UniformIndex(4), rng,
                                         -scale, scale);
      lg.bias.resize(lg.weights.rows());
      for (double& v : lg.bias) v = rng.Uniform(-scale, scale);
      g.push_back(std::move(lg));
    }
    const double bound = std::pow(10.0, rng.Uniform(-3.0, 2.0));
    auto clipped = dp::ClipFlat({g}, bound);
    if (!clipped.ok()) return Fail(std::string(clipped.status().message()));
    double sq = 0.0;
    for (const auto& l : clipped->clipped[0]) {
      for (double v : l.weights.values()) sq += v * v;
      for (double v : l.bias) sq += v * v;
    }
    const double norm = std::sqrt(sq);
    worst_ratio = std::max(worst_ratio, norm / bound);
    if (norm > bound + kClipSlack) ++violations;
  }
  // Noise standard deviation.
  constexpr size_t kSamples = 100000;
  constexpr double kSigma = 0.37;
  nn::Rng noise_rng(404);
  const nn::Tensor2 noise = dp::GaussianNoise(1, kSamples, kSigma, noise_rng);
  double mean = 0.0;
  for (double v : noise.values()) mean += v;
  mean /= kSamples;
  double var = 0.0;
  for (double v : noise.values()) var += (v - mean) * (v - mean);
  const double std_dev = std::sqrt(var / (kSamples - 1));
  const double std_err = std::fabs(std_dev / kSigma - 1.0);
  // kappa = 0 equals the unprotected mean when nothing is clipped.
  bool kappa_zero_exact = true;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<nn::Gradients> per_sample;
    const size_t n = 1 + rng.UniformIndex(40);
    for (size_t i = 0; i < n; ++i) {
      nn::LayerGradient lg{testing::RandomTensor(3, 4, rng), {0.1, -0.2, 0.3}};
      per_sample.push_back({lg});
    }
    nn::Rng a(trial), b(trial);
    auto protected_mean = dp::DpGradient(per_sample, n, {1e6, 0.0, true}, a);
    auto plain_mean = dp::DpGradient(per_sample, n, {1e6, 0.0, false}, b);
    kappa_zero_exact = kappa_zero_exact && protected_mean.ok() && plain_mean.ok() &&
                       *protected_mean == *plain_mean && a.NextU64() == b.NextU64();
  }
  const std::string detail = absl::StrFormat(
      "%d clip sets, %d norms above bound + 1e-12 (max norm/bound %.17g); noise std relative error "
      "%.4f at %d samples (< 0.01); kappa=0 bitwise %s",
      kSets, violations, worst_ratio, std_err, kSamples, kappa_zero_exact ? "equal" : "DIFFERENT");
  return violations == 0 && std_err < 0.01 && kappa_zero_exact ? Pass(detail) : Fail(detail);
}

Outcome ApOracle(const Context&) {
  nn::Rng rng(505);
  constexpr int kInstances = 100;
  double worst = 0.0;
  for (int inst = 0; inst < kInstances; ++inst) {
    const size_t n = 2 + rng.UniformIndex(499);
    // Every third instance uses coarse scores so that ties occur.
    const bool ties = inst % 3 == 0;
    std::vector<double> scores(n);
    std::vector<bool> positives(n);
    for (size_t i = 0; i < n; ++i) {
      scores[i] = ties ? static_cast<double>(rng.UniformIndex(8)) : rng.Uniform(0.0, 1.0);
      positives[i] = rng.Uniform(0.0, 1.0) < 0.2;
    }
    positives[rng.UniformIndex(n)] = true;
    auto ap = eval::AveragePrecision(scores, positives);
    if (!ap.ok()) return Fail(std::string(ap.status().message()));
    worst = std::max(worst, std::fabs(*ap - testing::BruteForceAveragePrecision(scores, positives)));
  }
  bool perfect = true;
  for (int trial = 0; trial < 20; ++trial) {
    const size_t n = 5 + rng.UniformIndex(200);
    const size_t k = 1 + rng.UniformIndex(n);
    std::vector<double> scores(n);
    std::vector<bool> positives(n, false);
    for (size_t i = 0; i < n; ++i) {
      positives[i] = i < k;
      scores[i] = positives[i] ? rng.Uniform(2.0, 3.0) : rng.Uniform(0.0, 1.0);
    }
    auto ap = eval::AveragePrecision(scores, positives);
    perfect = perfect && ap.ok() && *ap == 1.0;
  }
  const std::string detail = absl::StrFormat(
      "%d instances (N <= 500), max |AP - oracle| %.3g (< 1e-12); perfect ranking %s",
      kInstances, worst, perfect ? "exactly 1.0" : "NOT 1.0");
  return worst < 1e-12 && perfect ? Pass(detail) : Fail(detail);
}

Outcome DegenerateFederation(const Context&) {
  data::SyntheticSpec synth;
  synth.records = 500;
  const auto raw = data::GenerateSynthetic(synth, 606);
  auto enc = data::Encode(raw, raw.schema);
  if (!enc.ok()) return Fail(std::string(enc.status().message()));
  aen::LossSpec spec;
  spec.column_map = enc->column_map;
  fed::FederationConfig cfg;
  cfg.gamma = 1;
  cfg.lambda = 1;
  cfg.rounds = 3;
  cfg.iterations = 20;
  cfg.batch_size = 32;
  cfg.seed = 7;
  cfg.dp.enabled = false;
  cfg.split = aen::SplitMask::Symmetric(0);
  auto run = fed::RunFederation(cfg, {enc->matrix}, spec);
  if (!run.ok()) return Fail(std::string(run.status().message()));
  auto federated = run->ModelForClient(0);
  if (!federated.ok()) return Fail(std::string(federated.status().message()));
  const aen::AenParams central = testing::CentralizedTraining(enc->matrix, spec, cfg);
  size_t differing = 0;
  for (size_t l = 0; l < central.layers.size(); ++l) {
    const auto& a = central.layers[l];
    const auto& b = federated->layers[l];
    for (size_t c = 0; c < a.weights.size(); ++c) {
      differing += a.weights.values()[c] != b.weights.values()[c];
    }
    for (size_t c = 0; c < a.bias.size(); ++c) differing += a.bias[c] != b.bias[c];
  }
  const std::string detail = absl::StrFormat(
      "500 records, %d rounds x %d iterations, %d rounds run, %d of %d parameters differ",
      cfg.rounds, cfg.iterations, run->history.size(), differing, aen::ParameterCount(central));
  return differing == 0 && run->history.size() == cfg.rounds ? Pass(detail) : Fail(detail);
}

Outcome SplitRoundTrip(const Context&) {
  size_t identity_failures = 0;
  size_t count_failures = 0;
  std::vector<size_t> dims = {2, 7, 61, 287, 618};
  for (size_t d : dims) {
    const auto params = *aen::BuildAen(d, 800 + d);
    for (int c = 0; c <= 8; ++c) {
      const auto mask = aen::SplitMask::Symmetric(c);
      auto split = aen::SplitParams(params, mask);
      if (!split.ok()) return Fail(std::string(split.status().message()));
      auto merged = aen::MergeParams(split->public_part, split->private_part, mask);
      if (!merged.ok() || !(*merged == params)) ++identity_failures;
    }
    // Hand count: all layers, minus the d->128 input layer and the 128->d
    // output layer.
    size_t total = 0;
    size_t prev = d;
    for (size_t w : aen::kEncoderWidths) {
      total += prev * w + w;
      prev = w;
    }
    for (size_t i = aen::kSideDepth; i-- > 0;) {
      const size_t w = i == 0 ? d : aen::kEncoderWidths[i - 1];
      total += prev * w + w;
      prev = w;
    }
    const size_t first_encoder = d * 128 + 128;
    const size_t last_decoder = 128 * d + d;
    const auto split = *aen::SplitParams(params, aen::SplitMask::Symmetric(1));
    if (total != aen::ParameterCount(params) ||
        split.public_part.ParameterCount() != total - (first_encoder + last_decoder) ||
        split.private_part.ParameterCount() != first_encoder + last_decoder) {
      ++count_failures;
    }
  }
  const std::string detail = absl::StrFormat(
      "%d input widths x cuts 0..8: %d round-trip failures; cut 1 shared-count mismatches %d",
      dims.size(), identity_failures, count_failures);
  return identity_failures == 0 && count_failures == 0 ? Pass(detail) : Fail(detail);
}

Outcome InjectionIdentifiability(const Context&) {
  size_t mismatches = 0;
  size_t globals = 0;
  for (uint64_t seed = 1; seed <= 5; ++seed) {
    const auto raw = data::GenerateSynthetic(data::SyntheticSpec{}, seed);
    auto injected = data::InjectAnomalies(raw, 20, 40, seed);
    if (!injected.ok()) return Fail(std::string(injected.status().message()));
    const std::vector<bool> flagged = testing::AllValuesUnique(*injected);
    for (size_t r = 0; r < injected->size(); ++r) {
      const bool is_global = injected->labels[r] == data::Label::kGlobalAnomaly;
      globals += is_global;
      mismatches += flagged[r] != is_global;
    }
  }
  const std::string detail = absl::StrFormat(
      "5 synthetic datasets (8000 + 60 records): %d hidden globals, %d scan mismatches", globals,
      mismatches);
  return mismatches == 0 && globals == 100 ? Pass(detail) : Fail(detail);
}

namespace {

// history.csv without the wall-clock column.
std::string StripTiming(const std::string& text) {
  std::vector<std::string> lines = absl::StrSplit(text, '\n');
  if (lines.empty()) return text;
  const std::vector<std::string> header = absl::StrSplit(lines[0], ',');
  const auto it = std::find(header.begin(), header.end(), "elapsed_ms");
  if (it == header.end()) return text;
  const size_t col = it - header.begin();
  for (std::string& line : lines) {
    if (line.empty()) continue;
    std::vector<std::string> cells = absl::StrSplit(line, ',');
    cells.erase(cells.begin() + col);
    line = absl::StrJoin(cells, ",");
  }
  return absl::StrJoin(lines, "\n");
}

// Relative path -> content hash for every file below `root`.
std::map<std::string, std::string> HashTree(const std::string& root) {
  std::map<std::string, std::string> out;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (!entry.is_regular_file()) continue;
    std::string text = testing::ReadFile(entry.path().string());
    if (entry.path().filename() == "history.csv") text = StripTiming(text);
    out[fs::relative(entry.path(), root).string()] =
        util::HexDigest(util::Fnv1a64(text));
  }
  return out;
}

struct CliRun {
  int code = -1;
  std::string stdout_hash;
};

CliRun Invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "fedaudit");
  std::ostringstream out, err;
  CliRun run;
  run.code = cli::RunCli(args, out, err);
  run.stdout_hash = util::HexDigest(util::Fnv1a64(out.str()));
  return run;
}

constexpr char kSmallConfig[] = R"(# determinism check
[dataset]
synthetic_records = 400
synthetic_cardinalities = 5, 6, 7
data_seed = 3
[anomalies]
n_global = 4
n_local = 6
[federation]
gamma = 8
lambda = 2
rounds = 3
iterations = 5
batch_size = 8
checkpoint_every = 1
[dp]
enabled = true
grad_max = 1
kappa = 0.1
[sweep]
grad_max = 0.5, 1
kappa = 0, 0.1
cut = 1, 2
lambda = 1, 3
[run]
seeds = 1, 2
)";

}  // namespace

Outcome Determinism(const Context& ctx) {
  const std::string root = (fs::path(ctx.work_dir) / "determinism").string();
  fs::remove_all(root);
  fs::create_directories(root);
  const std::string config = (fs::path(root) / "small.ini").string();
  testing::WriteFile(config, kSmallConfig);

  // Each command runs twice into separate directories; the second pass uses
  // more worker threads.
  std::vector<std::string> problems;
  size_t files = 0;
  const std::vector<std::vector<std::string>> commands = {
      {"prepare", "--format", "json"},
      {"train", "--quiet"},
      {"eval"},
      {"sweep", "--grid", "dp", "--quiet", "--format", "csv"},
      {"sweep", "--grid", "cut", "--quiet"},
      {"sweep", "--grid", "lambda", "--quiet"},
      {"synth", "--records", "300"},
  };
  for (size_t c = 0; c < commands.size(); ++c) {
    const std::string name = absl::StrCat(c, "_", commands[c][0]);
    std::vector<CliRun> runs;
    std::vector<std::map<std::string, std::string>> trees;
    for (int pass = 0; pass < 2; ++pass) {
      const std::string out = (fs::path(root) / absl::StrCat("pass", pass) / name).string();
      fs::create_directories(out);
      std::vector<std::string> args = commands[c];
      if (args[0] == "synth") {
        args.insert(args.end(), {"--output", (fs::path(out) / "synth.csv").string()});
      } else {
        args.insert(args.end(), {"--config", config, "--out", out});
        if (args[0] == "train" || args[0] == "sweep") {
          args.insert(args.end(), {"--jobs", pass == 0 ? "1" : "3"});
        }
      }
      if (args[0] == "eval") {
        // Needs a finished training run in the same directory.
        Invoke({"train", "--quiet", "--config", config, "--out", out});
      }
      runs.push_back(Invoke(args));
      trees.push_back(HashTree(out));
    }
    if (runs[0].code != 0 || runs[1].code != 0) {
      problems.push_back(absl::StrCat(name, " exit ", runs[0].code, "/", runs[1].code));
    }
    // synth prints the output path, which differs between passes by design.
    if (commands[c][0] != "synth" && runs[0].stdout_hash != runs[1].stdout_hash) {
      problems.push_back(absl::StrCat(name, " stdout"));
    }
    if (trees[0] != trees[1]) problems.push_back(absl::StrCat(name, " artefacts"));
    files += trees[0].size();
  }
  const std::string detail =
      problems.empty()
          ? absl::StrFormat("%d commands run twice, %d artefact files identical (history timing "
                            "column excluded)",
                            commands.size(), files)
          : absl::StrCat("differences: ", absl::StrJoin(problems, ", "));
  return problems.empty() ? Pass(detail) : Fail(detail);
}

}  // namespace fedaudit::acceptance
