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

#include "cli.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>

#include "CLI11.hpp"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "fedaudit/data/csv.h"
#include "fedaudit/data/synthetic.h"
#include "fedaudit/experiment/config.h"
#include "fedaudit/experiment/runner.h"

namespace fedaudit::cli {
namespace {

constexpr char kOutputDirEnv[] = "FEDAUDIT_OUTPUT_DIR";

struct CommonFlags {
  std::string config_path;
  std::optional<uint64_t> seed_override;
  std::string out_dir;
  size_t jobs = 1;
  std::string format = "json";
  std::string eval_scope;
  std::string ap_mode;
  bool quiet = false;
};

void AddCommon(CLI::App* cmd, CommonFlags& f, bool training) {
  cmd->add_option("--config", f.config_path, "Experiment config file")->required();
  cmd->add_option("--out", f.out_dir, "Output directory (overrides $FEDAUDIT_OUTPUT_DIR)");
  cmd->add_option("--format", f.format, "Summary format on stdout")
      ->check(CLI::IsMember({"json", "csv"}));
  if (training) {
    cmd->add_option("--seed-override", f.seed_override, "Run this single seed only");
    cmd->add_option("--jobs", f.jobs, "Parallel seeds or sweep cells")
        ->check(CLI::PositiveNumber);
    cmd->add_flag("--quiet", f.quiet, "No progress output");
  }
}

void AddEvalFlags(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--eval-scope", f.eval_scope, "Records to score")
      ->check(CLI::IsMember({"client0", "all"}));
  cmd->add_option("--ap-mode", f.ap_mode, "Other anomaly class in per-class AP")
      ->check(CLI::IsMember({"exclude", "negative"}));
}

int Fail(std::ostream& err, std::string_view stage, const absl::Status& s, int code) {
  err << "fedaudit: " << stage << " failed: " << s.message() << "\n";
  return code;
}

// Loads the config and applies command-line and environment overrides.
absl::StatusOr<experiment::ExperimentConfig> ResolveConfig(const CommonFlags& f) {
  auto config = experiment::LoadConfig(f.config_path);
  if (!config.ok()) return config.status();
  if (f.seed_override) config->seeds = {*f.seed_override};
  if (!f.out_dir.empty()) {
    config->output_dir = f.out_dir;
  } else if (const char* env = std::getenv(kOutputDirEnv); env != nullptr && *env != '\0') {
    config->output_dir = env;
  }
  if (!f.eval_scope.empty()) {
    auto scope = experiment::ParseEvalScope(f.eval_scope);
    if (!scope.ok()) return scope.status();
    config->eval.scope = *scope;
  }
  if (!f.ap_mode.empty()) {
    auto mode = eval::ParseOtherClassMode(f.ap_mode);
    if (!mode.ok()) return mode.status();
    config->eval.other_class = *mode;
  }
  if (absl::Status s = experiment::ValidateConfig(*config); !s.ok()) return s;
  return config;
}

int CmdPrepare(const CommonFlags& f, std::ostream& out, std::ostream& err) {
  auto config = ResolveConfig(f);
  if (!config.ok()) return Fail(err, "config", config.status(), kExitUsage);
  auto summary = experiment::RunPrepare(*config, config->output_dir);
  if (!summary.ok()) return Fail(err, "prepare", summary.status(), kExitData);
  out << (f.format == "csv" ? experiment::PrepareSummaryCsv(*summary)
                            : experiment::PrepareSummaryJson(*summary) + "\n");
  return kExitOk;
}

int CmdTrain(const CommonFlags& f, std::ostream& out, std::ostream& err) {
  auto config = ResolveConfig(f);
  if (!config.ok()) return Fail(err, "config", config.status(), kExitUsage);
  bool reused = false;
  auto prepared = experiment::LoadOrPrepare(*config, config->output_dir, &reused);
  if (!prepared.ok()) return Fail(err, "prepare", prepared.status(), kExitData);
  if (!f.quiet) err << (reused ? "using prepared data" : "prepared data") << "\n";
  experiment::RunOptions options{f.jobs, f.quiet ? nullptr : &err, true};
  auto result = experiment::TrainOnPrepared(*config, *prepared, config->output_dir, options);
  if (!result.ok()) return Fail(err, "train", result.status(), kExitTraining);
  out << (f.format == "csv" ? experiment::RunResultCsv(*result)
                            : experiment::RunResultJson(*result) + "\n");
  return kExitOk;
}

int CmdEval(const CommonFlags& f, std::ostream& out, std::ostream& err) {
  auto config = ResolveConfig(f);
  if (!config.ok()) return Fail(err, "config", config.status(), kExitUsage);
  auto prepared = data::LoadPrepared(experiment::PreparedDir(config->output_dir));
  if (!prepared.ok()) return Fail(err, "eval", prepared.status(), kExitData);
  if (prepared->config_digest != experiment::DataDigest(*config)) {
    return Fail(err, "eval",
                absl::FailedPreconditionError("prepared data does not match the config"),
                kExitData);
  }
  auto result = experiment::EvaluateCheckpoints(*config, *prepared, config->output_dir);
  if (!result.ok()) {
    const bool missing = result.status().code() == absl::StatusCode::kFailedPrecondition;
    return Fail(err, "eval", result.status(), missing ? kExitData : kExitTraining);
  }
  out << (f.format == "csv" ? experiment::RunResultCsv(*result)
                            : experiment::RunResultJson(*result) + "\n");
  return kExitOk;
}

int CmdSweep(const CommonFlags& f, const std::string& grid, bool keep_config, std::ostream& out,
             std::ostream& err) {
  auto config = ResolveConfig(f);
  if (!config.ok()) return Fail(err, "config", config.status(), kExitUsage);
  auto kind = experiment::ParseSweepKind(grid);
  if (!kind.ok()) return Fail(err, "config", kind.status(), kExitUsage);
  auto cells = experiment::BuildSweepCells(*config, *kind, keep_config);
  if (!cells.ok()) return Fail(err, "config", cells.status(), kExitUsage);
  auto prepared = experiment::LoadOrPrepare(*config, config->output_dir);
  if (!prepared.ok()) return Fail(err, "prepare", prepared.status(), kExitData);
  experiment::RunOptions options{f.jobs, f.quiet ? nullptr : &err, false};
  const experiment::SweepResult result =
      experiment::RunSweep(*cells, *prepared, config->output_dir, options);
  for (size_t i = 0; i < result.runs.size(); ++i) {
    if (!result.runs[i].ok()) {
      err << "fedaudit: sweep cell " << result.cells[i].name
          << " failed: " << result.runs[i].status().message() << "\n";
    }
  }
  if (f.format == "csv") {
    out << experiment::SweepCsv(result);
  } else {
    out << "[";
    for (size_t i = 0; i < result.runs.size(); ++i) {
      if (i > 0) out << ",";
      out << "\n{\"cell\": \"" << result.cells[i].name << "\", \"result\": ";
      out << (result.runs[i].ok() ? experiment::RunResultJson(*result.runs[i]) : "null") << "}";
    }
    out << "\n]\n";
  }
  return result.failures() == 0 ? kExitOk : kExitPartialSweep;
}

int CmdSynth(size_t records, const std::string& cards, uint64_t seed, const std::string& path,
             std::ostream& out, std::ostream& err) {
  data::SyntheticSpec spec;
  spec.records = records;
  if (!cards.empty()) {
    spec.cardinalities.clear();
    for (absl::string_view c : absl::StrSplit(cards, ',')) {
      size_t v = 0;
      if (!absl::SimpleAtoi(c, &v) || v == 0) {
        err << "fedaudit: config failed: bad cardinality '" << c << "'\n";
        return kExitUsage;
      }
      spec.cardinalities.push_back(v);
    }
  }
  const data::RawDataset raw = data::GenerateSynthetic(spec, seed);
  if (absl::Status s = data::WriteCsv(raw, path); !s.ok()) {
    return Fail(err, "synth", s, kExitData);
  }
  out << "wrote " << raw.size() << " records to " << path << "\n";
  return kExitOk;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Federated, differentially private autoencoder anomaly detection"};
  app.require_subcommand(1);

  CommonFlags prepare_flags, train_flags, eval_flags, sweep_flags;
  auto* prepare = app.add_subcommand("prepare", "Load, inject, encode and partition the data");
  AddCommon(prepare, prepare_flags, false);

  auto* train = app.add_subcommand("train", "Federated training and evaluation for all seeds");
  AddCommon(train, train_flags, true);
  AddEvalFlags(train, train_flags);

  auto* evaluate = app.add_subcommand("eval", "Re-score the final checkpoints of a train run");
  AddCommon(evaluate, eval_flags, false);
  AddEvalFlags(evaluate, eval_flags);

  auto* sweep = app.add_subcommand("sweep", "Grid of training runs");
  AddCommon(sweep, sweep_flags, true);
  AddEvalFlags(sweep, sweep_flags);
  std::string grid;
  bool keep_config = false;
  sweep->add_option("--grid", grid, "Grid to run")
      ->required()
      ->check(CLI::IsMember({"dp", "cut", "lambda"}));
  sweep->add_flag("--keep-config", keep_config, "Do not pin the non-swept settings");

  auto* synth = app.add_subcommand("synth", "Write a synthetic journal-entry CSV");
  size_t records = 8000;
  std::string cards;
  uint64_t synth_seed = 1;
  std::string synth_path;
  synth->add_option("--records", records, "Number of records");
  synth->add_option("--cardinalities", cards, "Comma-separated attribute cardinalities");
  synth->add_option("--seed", synth_seed, "Generator seed");
  synth->add_option("--output", synth_path, "CSV path")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend() - 1);
  try {
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "fedaudit: usage error: " << e.what() << "\n";
    for (CLI::App* sub : app.get_subcommands()) err << sub->help();
    return kExitUsage;
  }

  if (prepare->parsed()) return CmdPrepare(prepare_flags, out, err);
  if (train->parsed()) return CmdTrain(train_flags, out, err);
  if (evaluate->parsed()) return CmdEval(eval_flags, out, err);
  if (sweep->parsed()) return CmdSweep(sweep_flags, grid, keep_config, out, err);
  if (synth->parsed()) return CmdSynth(records, cards, synth_seed, synth_path, out, err);
  return kExitUsage;
}

}  // namespace fedaudit::cli
