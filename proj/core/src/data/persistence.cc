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

#include "fedaudit/data/persistence.h"

#include <filesystem>
#include <fstream>

#include "absl/strings/str_cat.h"
#include "fedaudit/errors.h"
#include "fedaudit/status_macros.h"
#include "io/binary_io.h"
#include "json.hpp"

namespace fedaudit::data {
namespace {

using nlohmann::json;

}  // namespace

absl::Status WriteMatrix(const nn::Tensor2& matrix, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return DataError(absl::StrCat("cannot write '", path, "'"));
  io::WriteU64(out, matrix.rows());
  io::WriteU64(out, matrix.cols());
  io::WriteDoubles(out, matrix.values());
  if (!out) return DataError(absl::StrCat("write failed for '", path, "'"));
  return absl::OkStatus();
}

absl::StatusOr<nn::Tensor2> ReadMatrix(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return DataError(absl::StrCat("cannot open '", path, "'"));
  uint64_t rows, cols;
  if (!io::ReadU64(in, &rows) || !io::ReadU64(in, &cols)) {
    return DataError(absl::StrCat("truncated matrix header in '", path, "'"));
  }
  nn::Tensor2 matrix(rows, cols);
  if (!io::ReadDoubles(in, matrix.values())) {
    return DataError(absl::StrCat("truncated matrix body in '", path, "'"));
  }
  return matrix;
}

absl::Status SavePrepared(const PreparedDataset& prepared, const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) return DataError(absl::StrCat("cannot create '", dir, "': ", ec.message()));

  const EncodedDataset& enc = prepared.encoded;
  json manifest;
  manifest["format_version"] = kPreparedFormatVersion;
  manifest["config_digest"] = prepared.config_digest;
  manifest["schema"] = {{"categorical", prepared.schema.categorical},
                        {"numeric", prepared.schema.numeric},
                        {"department", prepared.schema.department}};
  manifest["vocab"] = enc.vocab;
  json ranges = json::array();
  for (const auto& [lo, hi] : enc.numeric_ranges) ranges.push_back({lo, hi});
  manifest["numeric_ranges"] = ranges;
  json columns = json::array();
  for (const ColumnSlice& s : enc.column_map) {
    columns.push_back({{"attribute", s.attribute},
                       {"categorical", s.categorical},
                       {"offset", s.offset},
                       {"width", s.width}});
  }
  manifest["column_map"] = columns;
  std::vector<int> labels;
  labels.reserve(enc.labels.size());
  for (Label l : enc.labels) labels.push_back(static_cast<int>(l));
  manifest["labels"] = labels;
  manifest["label_codes"] = {"normal", "global", "local"};
  manifest["partition"] = {{"gamma", prepared.plan.gamma},
                           {"mode", std::string(PartitionModeName(prepared.plan.mode))},
                           {"sizes", prepared.plan.Sizes()},
                           {"assignments", prepared.plan.assignments}};
  manifest["matrix_file"] = kMatrixFile;
  manifest["rows"] = enc.matrix.rows();
  manifest["cols"] = enc.matrix.cols();

  const std::string manifest_path = (std::filesystem::path(dir) / kManifestFile).string();
  std::ofstream out(manifest_path, std::ios::binary);
  if (!out) return DataError(absl::StrCat("cannot write '", manifest_path, "'"));
  out << manifest.dump(1) << '\n';
  if (!out) return DataError(absl::StrCat("write failed for '", manifest_path, "'"));
  return WriteMatrix(enc.matrix, (std::filesystem::path(dir) / kMatrixFile).string());
}

absl::StatusOr<PreparedDataset> LoadPrepared(const std::string& dir) {
  const std::string manifest_path = (std::filesystem::path(dir) / kManifestFile).string();
  std::ifstream in(manifest_path, std::ios::binary);
  if (!in) return DataError(absl::StrCat("cannot open '", manifest_path, "'"));
  PreparedDataset out;
  try {
    const json manifest = json::parse(in);
    if (manifest.at("format_version").get<int>() != kPreparedFormatVersion) {
      return DataError("unsupported prepared-dataset format version");
    }
    out.config_digest = manifest.at("config_digest").get<std::string>();
    const json& schema = manifest.at("schema");
    out.schema.categorical = schema.at("categorical").get<std::vector<std::string>>();
    out.schema.numeric = schema.at("numeric").get<std::vector<std::string>>();
    out.schema.department = schema.at("department").get<std::string>();
    out.encoded.vocab = manifest.at("vocab").get<std::vector<std::vector<std::string>>>();
    for (const json& r : manifest.at("numeric_ranges")) {
      out.encoded.numeric_ranges.emplace_back(r.at(0).get<double>(), r.at(1).get<double>());
    }
    for (const json& c : manifest.at("column_map")) {
      out.encoded.column_map.push_back({c.at("attribute").get<std::string>(),
                                        c.at("categorical").get<bool>(),
                                        c.at("offset").get<size_t>(),
                                        c.at("width").get<size_t>()});
    }
    for (int code : manifest.at("labels").get<std::vector<int>>()) {
      if (code < 0 || code > 2) return DataError("invalid label code in manifest");
      out.encoded.labels.push_back(static_cast<Label>(code));
    }
    const json& part = manifest.at("partition");
    out.plan.gamma = part.at("gamma").get<size_t>();
    FEDAUDIT_ASSIGN_OR_RETURN(out.plan.mode,
                              ParsePartitionMode(part.at("mode").get<std::string>()));
    out.plan.assignments = part.at("assignments").get<std::vector<uint32_t>>();
  } catch (const nlohmann::json::exception& e) {
    return DataError(absl::StrCat("malformed manifest '", manifest_path, "': ", e.what()));
  }
  FEDAUDIT_ASSIGN_OR_RETURN(out.encoded.matrix,
                            ReadMatrix((std::filesystem::path(dir) / kMatrixFile).string()));
  if (out.encoded.matrix.rows() != out.encoded.labels.size() ||
      out.plan.assignments.size() != out.encoded.labels.size()) {
    return DataError("prepared dataset row counts disagree");
  }
  return out;
}

}  // namespace fedaudit::data
