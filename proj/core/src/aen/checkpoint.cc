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

#include "fedaudit/aen/checkpoint.h"

#include <filesystem>
#include <fstream>

#include "absl/strings/str_cat.h"
#include "fedaudit/errors.h"
#include "fedaudit/status_macros.h"
#include "io/binary_io.h"
#include "json.hpp"

namespace fedaudit::aen {
namespace {

using nlohmann::json;

constexpr char kManifest[] = "model.json";
constexpr char kBlob[] = "params.bin";

}  // namespace

absl::Status SaveCheckpoint(const Checkpoint& checkpoint, const std::string& dir) {
  FEDAUDIT_RETURN_IF_ERROR(ValidateAen(checkpoint.params));
  FEDAUDIT_RETURN_IF_ERROR(ValidateMask(checkpoint.mask));
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) return DataError(absl::StrCat("cannot create '", dir, "': ", ec.message()));

  json layers = json::array();
  size_t values = 0;
  for (const nn::LayerParams& layer : checkpoint.params.layers) {
    const bool tanh = layer.activation.kind == nn::Activation::Kind::kTanh;
    layers.push_back({{"in", layer.in_dim()},
                      {"out", layer.out_dim()},
                      {"activation", tanh ? "tanh" : "leaky_relu"},
                      {"alpha", layer.activation.alpha}});
    values += layer.ParameterCount();
  }
  json manifest = {{"format_version", kCheckpointFormatVersion},
                   {"seed", checkpoint.seed},
                   {"config_digest", checkpoint.config_digest},
                   {"mask",
                    {{"cut_encoder", checkpoint.mask.cut_encoder},
                     {"cut_decoder", checkpoint.mask.cut_decoder}}},
                   {"layers", layers},
                   {"blob", kBlob},
                   {"values", values}};
  const std::string manifest_path = (std::filesystem::path(dir) / kManifest).string();
  std::ofstream mout(manifest_path, std::ios::binary);
  mout << manifest.dump(1) << "\n";
  if (!mout) return DataError(absl::StrCat("write failed for '", manifest_path, "'"));

  const std::string blob_path = (std::filesystem::path(dir) / kBlob).string();
  std::ofstream bout(blob_path, std::ios::binary);
  for (const nn::LayerParams& layer : checkpoint.params.layers) {
    io::WriteDoubles(bout, layer.weights.values());
    io::WriteDoubles(bout, layer.bias);
  }
  if (!bout) return DataError(absl::StrCat("write failed for '", blob_path, "'"));
  return absl::OkStatus();
}

absl::StatusOr<Checkpoint> LoadCheckpoint(const std::string& dir) {
  const std::string manifest_path = (std::filesystem::path(dir) / kManifest).string();
  std::ifstream min(manifest_path, std::ios::binary);
  if (!min) return DataError(absl::StrCat("cannot open '", manifest_path, "'"));
  Checkpoint checkpoint;
  std::string blob_name;
  try {
    const json manifest = json::parse(min);
    if (manifest.at("format_version").get<int>() != kCheckpointFormatVersion) {
      return DataError(absl::StrCat("unsupported checkpoint version in '", manifest_path, "'"));
    }
    checkpoint.seed = manifest.at("seed").get<uint64_t>();
    checkpoint.config_digest = manifest.value("config_digest", "");
    checkpoint.mask.cut_encoder = manifest.at("mask").at("cut_encoder").get<int>();
    checkpoint.mask.cut_decoder = manifest.at("mask").at("cut_decoder").get<int>();
    for (const json& l : manifest.at("layers")) {
      nn::LayerParams layer;
      layer.weights = nn::Tensor2(l.at("out").get<size_t>(), l.at("in").get<size_t>());
      layer.bias.assign(layer.weights.rows(), 0.0);
      const std::string kind = l.at("activation").get<std::string>();
      if (kind == "tanh") {
        layer.activation = nn::Activation::Tanh();
      } else if (kind == "leaky_relu") {
        layer.activation = nn::Activation::LeakyRelu(l.at("alpha").get<double>());
      } else {
        return DataError(absl::StrCat("unknown activation '", kind, "'"));
      }
      checkpoint.params.layers.push_back(std::move(layer));
    }
    blob_name = manifest.at("blob").get<std::string>();
  } catch (const json::exception& e) {
    return DataError(absl::StrCat("malformed checkpoint manifest '", manifest_path, "': ", e.what()));
  }

  const std::string blob_path = (std::filesystem::path(dir) / blob_name).string();
  std::ifstream bin(blob_path, std::ios::binary);
  if (!bin) return DataError(absl::StrCat("cannot open '", blob_path, "'"));
  for (nn::LayerParams& layer : checkpoint.params.layers) {
    if (!io::ReadDoubles(bin, layer.weights.values()) || !io::ReadDoubles(bin, layer.bias)) {
      return DataError(absl::StrCat("truncated parameter blob '", blob_path, "'"));
    }
  }
  FEDAUDIT_RETURN_IF_ERROR(ValidateAen(checkpoint.params));
  FEDAUDIT_RETURN_IF_ERROR(ValidateMask(checkpoint.mask));
  return checkpoint;
}

}  // namespace fedaudit::aen
