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

#ifndef FEDAUDIT_DP_DP_H_
#define FEDAUDIT_DP_DP_H_

#include <cstddef>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "fedaudit/nn/backprop.h"
#include "fedaudit/nn/layer.h"
#include "fedaudit/nn/rng.h"
#include "fedaudit/nn/tensor.h"

namespace fedaudit::dp {

struct DpConfig {
  // Flat l2 clipping bound.
  double grad_max = 1.0;
  // Noise multiplier.
  double kappa = 0.0;
  bool enabled = true;

  double sigma() const { return grad_max * kappa; }
};

absl::Status ValidateDpConfig(const DpConfig& config);

struct ClipResult {
  std::vector<nn::Gradients> clipped;
  // Flat norms before clipping.
  std::vector<double> norms;
};

// Scales each sample whose flat norm (over all layers) exceeds `grad_max`
// down to exactly that norm (up to rounding).
absl::StatusOr<ClipResult> ClipFlat(const std::vector<nn::Gradients>& per_sample,
                                    double grad_max);

// Per-sample scale factor min(1, grad_max / norm).
double ClipScale(double norm, double grad_max);

// i.i.d. N(0, sigma^2) entries. sigma == 0 yields zeros without drawing.
nn::Tensor2 GaussianNoise(size_t rows, size_t cols, double sigma, nn::Rng& rng);

// Adds N(0, sigma^2) to every coordinate, layer by layer, weights before bias.
// sigma == 0 leaves `g` and `rng` untouched.
void AddGaussianNoise(nn::Gradients& g, double sigma, nn::Rng& rng);

// (sum_i clip(g_i) + N(0, sigma^2 I)) / batch_size. With the mechanism
// disabled, the plain mean sum_i g_i / batch_size.
absl::StatusOr<nn::Gradients> DpGradient(const std::vector<nn::Gradients>& per_sample,
                                         size_t batch_size, const DpConfig& config,
                                         nn::Rng& rng);

struct PrivateBatch {
  nn::Gradients gradient;
  std::vector<double> losses;
  // Pre-clip flat norms; empty when the mechanism is disabled.
  std::vector<double> norms;
};

// DpGradient over one mini-batch without materialising per-sample gradients.
absl::StatusOr<PrivateBatch> PrivateBatchGradient(const nn::Tensor2& batch,
                                                  const nn::Tensor2& targets,
                                                  std::span<const nn::LayerParams> layers,
                                                  const nn::Loss& loss, const DpConfig& config,
                                                  nn::Rng& rng);

}  // namespace fedaudit::dp

#endif  // FEDAUDIT_DP_DP_H_
