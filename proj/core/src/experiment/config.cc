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

#include "fedaudit/experiment/config.h"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "absl/strings/ascii.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"
#include "fedaudit/errors.h"
#include "fedaudit/status_macros.h"
#include "fedaudit/util/fnv.h"

namespace fedaudit::experiment {
namespace {

std::string FormatDouble(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

absl::StatusOr<double> ParseDouble(absl::string_view s) {
  double v;
  if (!absl::SimpleAtod(s, &v)) return ConfigError(absl::StrCat("not a number: '", s, "'"));
  return v;
}

template <typename Int>
absl::StatusOr<Int> ParseInt(absl::string_view s) {
  Int v;
  if (!absl::SimpleAtoi(s, &v)) return ConfigError(absl::StrCat("not an integer: '", s, "'"));
  return v;
}

absl::StatusOr<bool> ParseBool(absl::string_view s) {
  const std::string lower = absl::AsciiStrToLower(s);
  if (lower == "true" || lower == "1" || lower == "yes") return true;
  if (lower == "false" || lower == "0" || lower == "no") return false;
  return ConfigError(absl::StrCat("not a boolean: '", s, "'"));
}

std::vector<std::string> SplitList(absl::string_view s) {
  std::vector<std::string> out;
  if (absl::StripAsciiWhitespace(s).empty()) return out;
  for (absl::string_view part : absl::StrSplit(s, ',')) {
    out.emplace_back(absl::StripAsciiWhitespace(part));
  }
  return out;
}

template <typename T, typename Parse>
absl::Status ParseList(absl::string_view s, std::vector<T>* out, Parse parse) {
  out->clear();
  for (const std::string& item : SplitList(s)) {
    FEDAUDIT_ASSIGN_OR_RETURN(T v, parse(item));
    out->push_back(v);
  }
  return absl::OkStatus();
}

template <typename T, typename Format>
std::string FormatList(const std::vector<T>& values, Format format) {
  std::vector<std::string> parts;
  for (const T& v : values) parts.push_back(format(v));
  return absl::StrJoin(parts, ",");
}

struct Field {
  const char* section;
  const char* key;
  std::function<std::string(const ExperimentConfig&)> get;
  std::function<absl::Status(ExperimentConfig&, absl::string_view)> set;
  bool data_field = false;
};

template <typename Ref>
Field StringField(const char* sec, const char* key, Ref ref, bool data = false) {
  return {sec, key, [ref](const ExperimentConfig& c) { return ref(c); },
          [ref](ExperimentConfig& c, absl::string_view v) {
            ref(c) = std::string(v);
            return absl::OkStatus();
          },
          data};
}

template <typename Int, typename Ref>
Field IntField(const char* sec, const char* key, Ref ref, bool data = false) {
  return {sec, key,
          [ref](const ExperimentConfig& c) {
            return absl::StrCat(ref(c));
          },
          [ref](ExperimentConfig& c, absl::string_view v) -> absl::Status {
            FEDAUDIT_ASSIGN_OR_RETURN(ref(c), ParseInt<Int>(v));
            return absl::OkStatus();
          },
          data};
}

template <typename Ref>
Field DoubleField(const char* sec, const char* key, Ref ref, bool data = false) {
  return {sec, key,
          [ref](const ExperimentConfig& c) {
            return FormatDouble(ref(c));
          },
          [ref](ExperimentConfig& c, absl::string_view v) -> absl::Status {
            FEDAUDIT_ASSIGN_OR_RETURN(ref(c), ParseDouble(v));
            return absl::OkStatus();
          },
          data};
}

template <typename Ref>
Field BoolField(const char* sec, const char* key, Ref ref) {
  return {sec, key,
          [ref](const ExperimentConfig& c) {
            return std::string(ref(c) ? "true" : "false");
          },
          [ref](ExperimentConfig& c, absl::string_view v) -> absl::Status {
            FEDAUDIT_ASSIGN_OR_RETURN(ref(c), ParseBool(v));
            return absl::OkStatus();
          }};
}

template <typename Ref>
Field StringListField(const char* sec, const char* key, Ref ref, bool data = false) {
  return {sec, key,
          [ref](const ExperimentConfig& c) {
            return absl::StrJoin(ref(c), ",");
          },
          [ref](ExperimentConfig& c, absl::string_view v) {
            ref(c) = SplitList(v);
            return absl::OkStatus();
          },
          data};
}

template <typename Int, typename Ref>
Field IntListField(const char* sec, const char* key, Ref ref, bool data = false) {
  return {sec, key,
          [ref](const ExperimentConfig& c) {
            return FormatList(ref(c),
                              [](Int v) { return absl::StrCat(v); });
          },
          [ref](ExperimentConfig& c, absl::string_view v) {
            return ParseList(v, &ref(c), [](const std::string& s) { return ParseInt<Int>(s); });
          },
          data};
}

template <typename Ref>
Field DoubleListField(const char* sec, const char* key, Ref ref) {
  return {sec, key,
          [ref](const ExperimentConfig& c) {
            return FormatList(ref(c), FormatDouble);
          },
          [ref](ExperimentConfig& c, absl::string_view v) {
            return ParseList(v, &ref(c), [](const std::string& s) { return ParseDouble(s); });
          }};
}

#define FA_REF(expr) [](auto& c) -> auto& { return c.expr; }

const std::vector<Field>& Fields() {
  static const auto* fields = new std::vector<Field>{
      StringField("dataset", "csv_path", FA_REF(dataset.csv_path), true),
      StringListField("dataset", "categorical", FA_REF(dataset.categorical), true),
      StringListField("dataset", "numeric", FA_REF(dataset.numeric), true),
      StringField("dataset", "department", FA_REF(dataset.department), true),
      IntField<size_t>("dataset", "synthetic_records", FA_REF(dataset.synthetic_records), true),
      IntListField<size_t>("dataset", "synthetic_cardinalities",
                           FA_REF(dataset.synthetic_cardinalities), true),
      IntField<size_t>("dataset", "synthetic_patterns", FA_REF(dataset.synthetic_patterns), true),
      DoubleField("dataset", "synthetic_noise", FA_REF(dataset.synthetic_noise), true),
      IntField<uint64_t>("dataset", "data_seed", FA_REF(dataset.data_seed), true),
      IntField<size_t>("anomalies", "n_global", FA_REF(anomalies.n_global), true),
      IntField<size_t>("anomalies", "n_local", FA_REF(anomalies.n_local), true),
      Field{"federation", "mode",
            [](const ExperimentConfig& c) {
              return std::string(data::PartitionModeName(c.federation.mode));
            },
            [](ExperimentConfig& c, absl::string_view v) -> absl::Status {
              FEDAUDIT_ASSIGN_OR_RETURN(c.federation.mode,
                                        data::ParsePartitionMode(std::string(v)));
              return absl::OkStatus();
            },
            true},
      IntField<size_t>("federation", "gamma", FA_REF(federation.gamma), true),
      IntField<size_t>("federation", "lambda", FA_REF(federation.lambda)),
      IntField<size_t>("federation", "rounds", FA_REF(federation.rounds)),
      IntField<size_t>("federation", "iterations", FA_REF(federation.iterations)),
      IntField<size_t>("federation", "batch_size", FA_REF(federation.batch_size)),
      Field{"federation", "optimizer",
            [](const ExperimentConfig& c) {
              return std::string(c.federation.optimizer == nn::OptimizerKind::kSgd ? "sgd"
                                                                                    : "adam");
            },
            [](ExperimentConfig& c, absl::string_view v) -> absl::Status {
              if (v == "adam") {
                c.federation.optimizer = nn::OptimizerKind::kAdam;
              } else if (v == "sgd") {
                c.federation.optimizer = nn::OptimizerKind::kSgd;
              } else {
                return ConfigError(absl::StrCat("unknown optimizer '", v, "'"));
              }
              return absl::OkStatus();
            }},
      DoubleField("federation", "learning_rate", FA_REF(federation.learning_rate)),
      DoubleField("federation", "beta1", FA_REF(federation.beta1)),
      DoubleField("federation", "beta2", FA_REF(federation.beta2)),
      BoolField("federation", "early_stop", FA_REF(federation.early_stop)),
      IntField<size_t>("federation", "patience", FA_REF(federation.patience)),
      DoubleField("federation", "rel_tol", FA_REF(federation.rel_tol)),
      IntField<size_t>("federation", "checkpoint_every", FA_REF(federation.checkpoint_every)),
      BoolField("dp", "enabled", FA_REF(dp.enabled)),
      DoubleField("dp", "grad_max", FA_REF(dp.grad_max)),
      DoubleField("dp", "kappa", FA_REF(dp.kappa)),
      IntField<int>("split", "cut_encoder", FA_REF(split.cut_encoder)),
      IntField<int>("split", "cut_decoder", FA_REF(split.cut_decoder)),
      DoubleField("loss", "vartheta", FA_REF(loss.vartheta)),
      DoubleField("loss", "clamp_epsilon", FA_REF(loss.clamp_epsilon)),
      Field{"eval", "scope",
            [](const ExperimentConfig& c) { return std::string(EvalScopeName(c.eval.scope)); },
            [](ExperimentConfig& c, absl::string_view v) -> absl::Status {
              FEDAUDIT_ASSIGN_OR_RETURN(c.eval.scope, ParseEvalScope(std::string(v)));
              return absl::OkStatus();
            }},
      Field{"eval", "other_class",
            [](const ExperimentConfig& c) {
              return std::string(eval::OtherClassModeName(c.eval.other_class));
            },
            [](ExperimentConfig& c, absl::string_view v) -> absl::Status {
              FEDAUDIT_ASSIGN_OR_RETURN(c.eval.other_class,
                                        eval::ParseOtherClassMode(std::string(v)));
              return absl::OkStatus();
            }},
      DoubleListField("sweep", "grad_max", FA_REF(sweep.grad_max)),
      DoubleListField("sweep", "kappa", FA_REF(sweep.kappa)),
      IntListField<int>("sweep", "cut", FA_REF(sweep.cut)),
      IntListField<size_t>("sweep", "lambda", FA_REF(sweep.lambda)),
      IntListField<uint64_t>("run", "seeds", FA_REF(seeds)),
      StringField("run", "output_dir", FA_REF(output_dir)),
  };
  return *fields;
}

#undef FA_REF

std::string Serialize(const ExperimentConfig& config, bool data_only, bool with_output_dir) {
  std::string out;
  std::string section;
  for (const Field& f : Fields()) {
    if (data_only && !f.data_field) continue;
    if (!with_output_dir && std::string_view(f.key) == "output_dir") continue;
    if (section != f.section) {
      if (!section.empty()) out += "\n";
      section = f.section;
      absl::StrAppend(&out, "[", section, "]\n");
    }
    const std::string value = f.get(config);
    absl::StrAppend(&out, f.key, " =", value.empty() ? "" : " ", value, "\n");
  }
  return out;
}

}  // namespace

std::string_view EvalScopeName(EvalScope scope) {
  return scope == EvalScope::kClient0 ? "client0" : "all";
}

absl::StatusOr<EvalScope> ParseEvalScope(std::string_view name) {
  if (name == "client0") return EvalScope::kClient0;
  if (name == "all") return EvalScope::kAll;
  return ConfigError(absl::StrCat("unknown eval scope '", std::string(name), "'"));
}

absl::StatusOr<ExperimentConfig> ParseConfig(std::string_view text) {
  ExperimentConfig config;
  std::string section;
  std::set<std::string> seen;
  int line_no = 0;
  for (absl::string_view raw : absl::StrSplit(absl::string_view(text.data(), text.size()), '\n')) {
    ++line_no;
    absl::string_view line = absl::StripAsciiWhitespace(raw);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        return ConfigError(absl::StrCat("line ", line_no, ": malformed section header"));
      }
      section = std::string(absl::StripAsciiWhitespace(line.substr(1, line.size() - 2)));
      bool known = false;
      for (const Field& f : Fields()) known = known || section == f.section;
      if (!known) return ConfigError(absl::StrCat("line ", line_no, ": unknown section [", section, "]"));
      continue;
    }
    const size_t eq = line.find('=');
    if (eq == absl::string_view::npos) {
      return ConfigError(absl::StrCat("line ", line_no, ": expected key = value"));
    }
    const std::string key(absl::StripAsciiWhitespace(line.substr(0, eq)));
    const absl::string_view value = absl::StripAsciiWhitespace(line.substr(eq + 1));
    if (section.empty()) {
      return ConfigError(absl::StrCat("line ", line_no, ": key '", key, "' outside a section"));
    }
    const std::string full = absl::StrCat(section, ".", key);
    if (!seen.insert(full).second) {
      return ConfigError(absl::StrCat("line ", line_no, ": duplicate key ", full));
    }
    if (section == "split" && key == "cut") {
      FEDAUDIT_ASSIGN_OR_RETURN(int cut, ParseInt<int>(value));
      config.split.cut_encoder = config.split.cut_decoder = cut;
      continue;
    }
    const Field* field = nullptr;
    for (const Field& f : Fields()) {
      if (section == f.section && key == f.key) field = &f;
    }
    if (field == nullptr) {
      return ConfigError(absl::StrCat("line ", line_no, ": unknown key ", full));
    }
    absl::Status s = field->set(config, value);
    if (!s.ok()) {
      return ConfigError(absl::StrCat("line ", line_no, " (", full, "): ", s.message()));
    }
  }
  return config;
}

absl::StatusOr<ExperimentConfig> LoadConfig(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return ConfigError(absl::StrCat("cannot open config '", path, "'"));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseConfig(buffer.str());
}

std::string SerializeConfig(const ExperimentConfig& config) {
  return Serialize(config, false, true);
}

std::string ConfigDigest(const ExperimentConfig& config) {
  return util::HexDigest(util::Fnv1a64(Serialize(config, false, false)));
}

std::string DataDigest(const ExperimentConfig& config) {
  return util::HexDigest(util::Fnv1a64(Serialize(config, true, false)));
}

fed::FederationConfig ToFederationConfig(const ExperimentConfig& config, uint64_t seed) {
  const FederationSection& f = config.federation;
  fed::FederationConfig out;
  out.lambda = f.lambda;
  out.gamma = f.gamma;
  out.rounds = f.rounds;
  out.iterations = f.iterations;
  out.batch_size = f.batch_size;
  out.optimizer.kind = f.optimizer;
  out.optimizer.learning_rate = f.learning_rate;
  out.optimizer.beta1 = f.beta1;
  out.optimizer.beta2 = f.beta2;
  out.dp = {config.dp.grad_max, config.dp.kappa, config.dp.enabled};
  out.split = {config.split.cut_encoder, config.split.cut_decoder};
  out.seed = seed;
  out.config_digest = ConfigDigest(config);
  out.early_stopping = {f.early_stop, f.patience, f.rel_tol};
  out.checkpoint_every = f.checkpoint_every;
  return out;
}

absl::Status ValidateConfig(const ExperimentConfig& config) {
  if (config.seeds.empty()) return ConfigError("at least one seed is required");
  const DatasetSection& d = config.dataset;
  if (d.csv_path.empty()) {
    if (d.synthetic_records == 0 || d.synthetic_cardinalities.empty() ||
        d.synthetic_patterns == 0 || !(d.synthetic_noise >= 0.0 && d.synthetic_noise <= 1.0)) {
      return ConfigError("synthetic dataset needs records, cardinalities, patterns and noise in [0, 1]");
    }
    for (size_t c : d.synthetic_cardinalities) {
      if (c == 0) return ConfigError("synthetic cardinalities must be positive");
    }
  } else {
    FEDAUDIT_RETURN_IF_ERROR(
        data::ValidateSchema({d.categorical, d.numeric, d.department}));
  }
  if (!(config.loss.vartheta >= 0.0 && config.loss.vartheta <= 1.0)) {
    return ConfigError("loss.vartheta must lie in [0, 1]");
  }
  if (!(config.loss.clamp_epsilon > 0.0 && config.loss.clamp_epsilon < 0.5)) {
    return ConfigError("loss.clamp_epsilon must lie in (0, 0.5)");
  }
  return fed::ValidateFederationConfig(ToFederationConfig(config, config.seeds.front()));
}

}  // namespace fedaudit::experiment
