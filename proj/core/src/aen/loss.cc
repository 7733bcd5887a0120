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

#include "fedaudit/aen/loss.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_cat.h"
#include "fedaudit/errors.h"
#include "fedaudit/status_macros.h"

namespace fedaudit::aen {
namespace {

// Writes row losses into `out`; `base` offsets the row index in errors.
absl::Status RowLosses(const nn::Tensor2& recon, const nn::Tensor2& target,
                       const ReconstructionLoss& loss, size_t base, std::span<double> out) {
  std::vector<double> scratch(recon.cols());
  for (size_t r = 0; r < recon.rows(); ++r) {
    out[r] = loss.Evaluate(recon.row(r), target.row(r), scratch);
    if (!std::isfinite(out[r])) {
      return NumericError(absl::StrCat("non-finite loss at sample ", base + r));
    }
  }
  return absl::OkStatus();
}

}  // namespace

absl::Status ValidateLossSpec(const LossSpec& spec, size_t dim) {
  if (!(spec.vartheta >= 0.0 && spec.vartheta <= 1.0)) {
    return ConfigError(absl::StrCat("vartheta must lie in [0, 1], got ", spec.vartheta));
  }
  if (!(spec.clamp_epsilon > 0.0 && spec.clamp_epsilon < 0.5)) {
    return ConfigError(
        absl::StrCat("clamp_epsilon must lie in (0, 0.5), got ", spec.clamp_epsilon));
  }
  size_t next = 0;
  for (const data::ColumnSlice& s : spec.column_map) {
    if (s.offset != next || s.width == 0 || (!s.categorical && s.width != 1)) {
      return ShapeError(absl::StrCat("column map slice at offset ", s.offset,
                                     " does not tile the encoding"));
    }
    next += s.width;
  }
  if (next != dim) {
    return ShapeError(absl::StrCat("column map covers ", next, " columns, data has ", dim));
  }
  return absl::OkStatus();
}

double ReconstructionLoss::Evaluate(std::span<const double> output,
                                    std::span<const double> target,
                                    std::span<double> grad) const {
  const double eps = spec_.clamp_epsilon;
  const double wc = spec_.vartheta;
  const double wn = 1.0 - spec_.vartheta;
  double bce_total = 0.0;
  double mse_total = 0.0;
  for (const data::ColumnSlice& s : spec_.column_map) {
    if (s.categorical) {
      const double inv_width = 1.0 / static_cast<double>(s.width);
      double sum = 0.0;
      for (size_t c = s.offset; c < s.offset + s.width; ++c) {
        const double raw = 0.5 * (output[c] + 1.0);
        const double p = std::clamp(raw, eps, 1.0 - eps);
        const double x = target[c];
        sum += x * std::log(p) + (1.0 - x) * std::log(1.0 - p);
        const bool clamped = raw < eps || raw > 1.0 - eps;
        grad[c] = clamped ? 0.0 : -wc * inv_width * (x / p - (1.0 - x) / (1.0 - p)) * 0.5;
      }
      bce_total += -inv_width * sum;
    } else {
      const size_t c = s.offset;
      const double diff = 0.5 * (output[c] + 1.0) - target[c];
      mse_total += diff * diff;
      grad[c] = wn * diff;
    }
  }
  return wc * bce_total + wn * mse_total;
}

double ReconstructionLoss::Value(std::span<const double> output,
                                 std::span<const double> target) const {
  std::vector<double> scratch(output.size());
  return Evaluate(output, target, scratch);
}

absl::StatusOr<std::vector<double>> ReconstructionLosses(const nn::Tensor2& recon,
                                                         const nn::Tensor2& target,
                                                         const LossSpec& spec) {
  if (!recon.SameShape(target)) {
    return ShapeError(absl::StrCat("reconstruction is ", recon.rows(), "x", recon.cols(),
                                   ", target is ", target.rows(), "x", target.cols()));
  }
  FEDAUDIT_RETURN_IF_ERROR(ValidateLossSpec(spec, recon.cols()));
  std::vector<double> out(recon.rows());
  FEDAUDIT_RETURN_IF_ERROR(RowLosses(recon, target, ReconstructionLoss(spec), 0, out));
  return out;
}

absl::StatusOr<std::vector<double>> ScoreMatrix(const nn::Tensor2& matrix,
                                                const AenParams& params, const LossSpec& spec,
                                                const ScoreOptions& options) {
  FEDAUDIT_RETURN_IF_ERROR(ValidateAen(params));
  if (matrix.cols() != params.input_dim()) {
    return ShapeError(absl::StrCat("data has ", matrix.cols(), " columns, model expects ",
                                   params.input_dim()));
  }
  if (options.batch_size == 0) return ConfigError("score batch_size must be positive");
  FEDAUDIT_RETURN_IF_ERROR(ValidateLossSpec(spec, matrix.cols()));

  const ReconstructionLoss loss(spec);
  std::vector<double> scores(matrix.rows());
  std::vector<size_t> idx;
  for (size_t start = 0; start < matrix.rows(); start += options.batch_size) {
    const size_t end = std::min(matrix.rows(), start + options.batch_size);
    idx.resize(end - start);
    for (size_t i = 0; i < idx.size(); ++i) idx[i] = start + i;
    const nn::Tensor2 batch = matrix.GatherRows(idx);
    FEDAUDIT_ASSIGN_OR_RETURN(nn::Tensor2 recon, nn::Predict(batch, params.layers));
    FEDAUDIT_RETURN_IF_ERROR(
        RowLosses(recon, batch, loss, start, std::span(scores).subspan(start, end - start)));
  }
  return scores;
}

absl::StatusOr<std::vector<double>> ScoreDataset(const data::EncodedDataset& data,
                                                 const AenParams& params, const LossSpec& spec,
                                                 const ScoreOptions& options) {
  return ScoreMatrix(data.matrix, params, spec, options);
}

}  // namespace fedaudit::aen
