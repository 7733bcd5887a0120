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

#ifndef FEDAUDIT_NN_BACKPROP_H_
#define FEDAUDIT_NN_BACKPROP_H_

#include <functional>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "fedaudit/nn/layer.h"
#include "fedaudit/nn/tensor.h"

namespace fedaudit::nn {

// Scalar per-sample objective on the network output.
class Loss {
 public:
  virtual ~Loss() = default;

  // Returns the loss of one sample and writes d loss / d output into `grad`
  // (same length as `output`).
  virtual double Evaluate(std::span<const double> output, std::span<const double> target,
                          std::span<double> grad) const = 0;
};

// 0.5 * sum_k (output_k - target_k)^2.
class HalfSquaredError final : public Loss {
 public:
  double Evaluate(std::span<const double> output, std::span<const double> target,
                  std::span<double> grad) const override;
};

// Gradient of one layer; shapes mirror LayerParams.
struct LayerGradient {
  Tensor2 weights;
  std::vector<double> bias;

  friend bool operator==(const LayerGradient&, const LayerGradient&) = default;
};

using Gradients = std::vector<LayerGradient>;

Gradients ZerosLike(std::span<const LayerParams> layers);
bool SameShape(const Gradients& a, const Gradients& b);
size_t ParameterCount(const Gradients& g);

// Norm over all coordinates of all layers concatenated.
double FlatSquaredNorm(const Gradients& g);
double FlatNorm(const Gradients& g);

void ScaleInPlace(Gradients& g, double factor);
absl::Status AddInPlace(Gradients& accumulator, const Gradients& g);

// Gradients of each sample's loss with respect to every weight and bias.
// Their mean equals the gradient of the batch-mean loss.
absl::StatusOr<std::vector<Gradients>> PerSampleGradients(
    const Tensor2& batch, const Tensor2& targets, std::span<const LayerParams> layers,
    const Loss& loss);

// Maps the flat l2 norm of one sample's gradient to the factor applied to that
// gradient before it is summed.
using SampleScale = std::function<double(double norm)>;

struct BatchGradient {
  // sum_b scale(norm_b) * g_b, accumulated in sample order.
  Gradients sum;
  std::vector<double> losses;
  // Per-sample flat l2 norms; filled only when a scale rule is supplied.
  std::vector<double> norms;
};

// Same values as summing PerSampleGradients in order (scaled per sample when
// `scale` is set) without materialising one gradient set per sample. Sample
// norms use ||d (x) a||^2 = ||d||^2 ||a||^2 for the outer-product structure
// of dense-layer weight gradients.
absl::StatusOr<BatchGradient> AccumulateGradients(const Tensor2& batch,
                                                  const Tensor2& targets,
                                                  std::span<const LayerParams> layers,
                                                  const Loss& loss,
                                                  const SampleScale& scale = {});

}  // namespace fedaudit::nn

#endif  // FEDAUDIT_NN_BACKPROP_H_
