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

#include "fedaudit/dp/dp.h"

#include <cmath>

#include "absl/strings/str_cat.h"
#include "fedaudit/errors.h"
#include "fedaudit/status_macros.h"

namespace fedaudit::dp {
namespace {

void DivideInPlace(nn::Gradients& g, double divisor) {
  for (auto& l : g) {
    for (double& v : l.weights.values()) v /= divisor;
    for (double& v : l.bias) v /= divisor;
  }
}

bool AllFinite(const nn::Gradients& g) {
  for (const auto& l : g) {
    if (!l.weights.AllFinite()) return false;
    for (double v : l.bias) {
      if (!std::isfinite(v)) return false;
    }
  }
  return true;
}

void FillGaussian(std::span<double> out, double sigma, nn::Rng& rng, bool accumulate) {
  for (double& v : out) {
    const double z = sigma * rng.Gaussian();
    v = accumulate ? v + z : z;
  }
}

}  // namespace

absl::Status ValidateDpConfig(const DpConfig& config) {
  if (!(config.grad_max > 0.0) || !std::isfinite(config.grad_max)) {
    return ConfigError(absl::StrCat("grad_max must be positive, got ", config.grad_max));
  }
  if (!(config.kappa >= 0.0) || !std::isfinite(config.kappa)) {
    return ConfigError(absl::StrCat("kappa must be non-negative, got ", config.kappa));
  }
  return absl::OkStatus();
}

double ClipScale(double norm, double grad_max) {
  return norm > grad_max ? grad_max / norm : 1.0;
}

absl::StatusOr<ClipResult> ClipFlat(const std::vector<nn::Gradients>& per_sample,
                                    double grad_max) {
  if (per_sample.empty()) return ConfigError("no gradients to clip");
  if (!(grad_max > 0.0)) return ConfigError("grad_max must be positive");
  ClipResult out;
  out.clipped = per_sample;
  out.norms.reserve(per_sample.size());
  for (size_t i = 0; i < out.clipped.size(); ++i) {
    if (!AllFinite(out.clipped[i])) {
      return NumericError(absl::StrCat("non-finite gradient at sample ", i));
    }
    const double norm = nn::FlatNorm(out.clipped[i]);
    out.norms.push_back(norm);
    if (norm > grad_max) nn::ScaleInPlace(out.clipped[i], ClipScale(norm, grad_max));
  }
  return out;
}

nn::Tensor2 GaussianNoise(size_t rows, size_t cols, double sigma, nn::Rng& rng) {
  nn::Tensor2 out(rows, cols);
  if (sigma != 0.0) FillGaussian(out.values(), sigma, rng, false);
  return out;
}

void AddGaussianNoise(nn::Gradients& g, double sigma, nn::Rng& rng) {
  if (sigma == 0.0) return;
  for (auto& l : g) {
    FillGaussian(l.weights.values(), sigma, rng, true);
    FillGaussian(l.bias, sigma, rng, true);
  }
}

absl::StatusOr<nn::Gradients> DpGradient(const std::vector<nn::Gradients>& per_sample,
                                         size_t batch_size, const DpConfig& config,
                                         nn::Rng& rng) {
  if (batch_size == 0) return ConfigError("batch size must be positive");
  if (per_sample.size() != batch_size) {
    return ConfigError(absl::StrCat("expected ", batch_size, " per-sample gradients, got ",
                                    per_sample.size()));
  }
  FEDAUDIT_RETURN_IF_ERROR(ValidateDpConfig(config));
  nn::Gradients sum;
  if (config.enabled) {
    FEDAUDIT_ASSIGN_OR_RETURN(ClipResult clipped, ClipFlat(per_sample, config.grad_max));
    sum = std::move(clipped.clipped[0]);
    for (size_t i = 1; i < batch_size; ++i) {
      FEDAUDIT_RETURN_IF_ERROR(nn::AddInPlace(sum, clipped.clipped[i]));
    }
    AddGaussianNoise(sum, config.sigma(), rng);
  } else {
    sum = per_sample[0];
    for (size_t i = 1; i < batch_size; ++i) {
      FEDAUDIT_RETURN_IF_ERROR(nn::AddInPlace(sum, per_sample[i]));
    }
  }
  DivideInPlace(sum, static_cast<double>(batch_size));
  return sum;
}

absl::StatusOr<PrivateBatch> PrivateBatchGradient(const nn::Tensor2& batch,
                                                  const nn::Tensor2& targets,
                                                  std::span<const nn::LayerParams> layers,
                                                  const nn::Loss& loss, const DpConfig& config,
                                                  nn::Rng& rng) {
  if (batch.rows() == 0) return ConfigError("batch size must be positive");
  FEDAUDIT_RETURN_IF_ERROR(ValidateDpConfig(config));
  nn::SampleScale scale;
  if (config.enabled) {
    const double grad_max = config.grad_max;
    scale = [grad_max](double norm) { return ClipScale(norm, grad_max); };
  }
  FEDAUDIT_ASSIGN_OR_RETURN(nn::BatchGradient acc,
                            nn::AccumulateGradients(batch, targets, layers, loss, scale));
  if (config.enabled) AddGaussianNoise(acc.sum, config.sigma(), rng);
  DivideInPlace(acc.sum, static_cast<double>(batch.rows()));
  if (!AllFinite(acc.sum)) return NumericError("non-finite private gradient");
  return PrivateBatch{std::move(acc.sum), std::move(acc.losses), std::move(acc.norms)};
}

}  // namespace fedaudit::dp
