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

#ifndef FEDAUDIT_AEN_LOSS_H_
#define FEDAUDIT_AEN_LOSS_H_

#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "fedaudit/aen/model.h"
#include "fedaudit/data/dataset.h"
#include "fedaudit/nn/backprop.h"
#include "fedaudit/nn/tensor.h"

namespace fedaudit::aen {

struct LossSpec {
  // Weight of the categorical term; the numeric term gets 1 - vartheta.
  double vartheta = 2.0 / 3.0;
  std::vector<data::ColumnSlice> column_map;
  double clamp_epsilon = 1e-6;
};

// Checks ranges and that the slices tile [0, dim) without gaps.
absl::Status ValidateLossSpec(const LossSpec& spec, size_t dim);

// Combined reconstruction loss on raw decoder outputs t in [-1, 1]. Outputs
// are mapped to p = (t + 1) / 2. Categorical slices use a width-normalised
// binary cross-entropy on p clamped to [eps, 1 - eps]; numeric slices use the
// squared error of the unclamped p.
class ReconstructionLoss final : public nn::Loss {
 public:
  // `spec` must already be valid for the output dimension.
  explicit ReconstructionLoss(LossSpec spec) : spec_(std::move(spec)) {}

  double Evaluate(std::span<const double> output, std::span<const double> target,
                  std::span<double> grad) const override;

  // Loss value only.
  double Value(std::span<const double> output, std::span<const double> target) const;

  const LossSpec& spec() const { return spec_; }

 private:
  LossSpec spec_;
};

// Per-row losses; non-finite values are reported with their row index.
absl::StatusOr<std::vector<double>> ReconstructionLosses(const nn::Tensor2& recon,
                                                         const nn::Tensor2& target,
                                                         const LossSpec& spec);

struct ScoreOptions {
  size_t batch_size = 256;
};

// Reconstruction loss of every record, in record order. Batching affects
// memory only: results are identical for any batch size.
absl::StatusOr<std::vector<double>> ScoreDataset(const data::EncodedDataset& data,
                                                 const AenParams& params, const LossSpec& spec,
                                                 const ScoreOptions& options = {});

// Same, for an arbitrary matrix.
absl::StatusOr<std::vector<double>> ScoreMatrix(const nn::Tensor2& matrix,
                                                const AenParams& params, const LossSpec& spec,
                                                const ScoreOptions& options = {});

}  // namespace fedaudit::aen

#endif  // FEDAUDIT_AEN_LOSS_H_
