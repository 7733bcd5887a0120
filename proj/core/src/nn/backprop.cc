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

#include "fedaudit/nn/backprop.h"

#include <cmath>
#include <utility>

#include "absl/strings/str_format.h"
#include "fedaudit/errors.h"
#include "fedaudit/status_macros.h"
#include "nn/kernels.h"

namespace fedaudit::nn {

double HalfSquaredError::Evaluate(std::span<const double> output,
                                  std::span<const double> target,
                                  std::span<double> grad) const {
  double loss = 0.0;
  for (size_t k = 0; k < output.size(); ++k) {
    const double diff = output[k] - target[k];
    grad[k] = diff;
    loss += 0.5 * diff * diff;
  }
  return loss;
}

Gradients ZerosLike(std::span<const LayerParams> layers) {
  Gradients g;
  g.reserve(layers.size());
  for (const LayerParams& l : layers) {
    g.push_back({Tensor2(l.out_dim(), l.in_dim()), std::vector<double>(l.out_dim(), 0.0)});
  }
  return g;
}

bool SameShape(const Gradients& a, const Gradients& b) {
  if (a.size() != b.size()) return false;
  for (size_t l = 0; l < a.size(); ++l) {
    if (!a[l].weights.SameShape(b[l].weights) || a[l].bias.size() != b[l].bias.size()) {
      return false;
    }
  }
  return true;
}

size_t ParameterCount(const Gradients& g) {
  size_t n = 0;
  for (const auto& l : g) n += l.weights.size() + l.bias.size();
  return n;
}

double FlatSquaredNorm(const Gradients& g) {
  double s = 0.0;
  for (const auto& l : g) s += SquaredNorm(l.weights.values()) + SquaredNorm(l.bias);
  return s;
}

double FlatNorm(const Gradients& g) { return std::sqrt(FlatSquaredNorm(g)); }

void ScaleInPlace(Gradients& g, double factor) {
  for (auto& l : g) {
    for (double& v : l.weights.values()) v *= factor;
    for (double& v : l.bias) v *= factor;
  }
}

absl::Status AddInPlace(Gradients& accumulator, const Gradients& g) {
  if (!SameShape(accumulator, g)) return ShapeError("gradient sets differ in shape");
  for (size_t l = 0; l < g.size(); ++l) {
    Axpy(1.0, g[l].weights.values(), accumulator[l].weights.values());
    Axpy(1.0, g[l].bias, accumulator[l].bias);
  }
  return absl::OkStatus();
}

namespace {

struct Backward {
  // delta[l] is d loss / d pre-activation of layer l, one row per sample.
  std::vector<Tensor2> delta;
  std::vector<double> losses;
  ForwardCache cache;
};

absl::StatusOr<Backward> Backpropagate(const Tensor2& batch, const Tensor2& targets,
                                       std::span<const LayerParams> layers,
                                       const Loss& loss) {
  if (batch.rows() != targets.rows()) {
    return ShapeError(absl::StrFormat("batch has %d rows but targets have %d",
                                      batch.rows(), targets.rows()));
  }
  if (layers.empty()) return ShapeError("network has no layers");
  FEDAUDIT_ASSIGN_OR_RETURN(ForwardResult fwd, ForwardAll(batch, layers));
  if (targets.cols() != fwd.output.cols()) {
    return ShapeError(absl::StrFormat("targets have %d columns but output has %d",
                                      targets.cols(), fwd.output.cols()));
  }

  const size_t n_layers = layers.size();
  const size_t n = batch.rows();
  Backward out;
  out.losses.resize(n);
  out.delta.resize(n_layers);
  for (size_t l = 0; l < n_layers; ++l) out.delta[l] = Tensor2(n, layers[l].out_dim());

  const LayerParams& last = layers.back();
  for (size_t b = 0; b < n; ++b) {
    auto d = out.delta.back().row(b);
    const double value = loss.Evaluate(fwd.output.row(b), targets.row(b), d);
    if (!std::isfinite(value)) {
      return NumericError(absl::StrFormat("non-finite loss at sample %d", b));
    }
    out.losses[b] = value;
    const auto z = fwd.cache.pre.back().row(b);
    for (size_t o = 0; o < d.size(); ++o) d[o] *= last.activation.Derivative(z[o]);
  }

  for (size_t l = n_layers - 1; l > 0; --l) {
    const LayerParams& layer = layers[l];
    const Activation& below = layers[l - 1].activation;
    for (size_t b = 0; b < n; ++b) {
      const auto d = out.delta[l].row(b);
      auto d_prev = out.delta[l - 1].row(b);
      for (size_t o = 0; o < layer.out_dim(); ++o) {
        if (d[o] != 0.0) Axpy(d[o], layer.weights.row(o), d_prev);
      }
      const auto z = fwd.cache.pre[l - 1].row(b);
      for (size_t i = 0; i < d_prev.size(); ++i) d_prev[i] *= below.Derivative(z[i]);
    }
  }
  out.cache = std::move(fwd.cache);
  return out;
}

}  // namespace

absl::StatusOr<std::vector<Gradients>> PerSampleGradients(
    const Tensor2& batch, const Tensor2& targets, std::span<const LayerParams> layers,
    const Loss& loss) {
  FEDAUDIT_ASSIGN_OR_RETURN(Backward bw, Backpropagate(batch, targets, layers, loss));
  std::vector<Gradients> grads;
  grads.reserve(batch.rows());
  for (size_t b = 0; b < batch.rows(); ++b) {
    Gradients g = ZerosLike(layers);
    for (size_t l = 0; l < layers.size(); ++l) {
      const auto d = bw.delta[l].row(b);
      const auto a = bw.cache.LayerInput(l).row(b);
      for (size_t o = 0; o < d.size(); ++o) {
        auto w = g[l].weights.row(o);
        for (size_t i = 0; i < a.size(); ++i) w[i] = d[o] * a[i];
        g[l].bias[o] = d[o];
      }
    }
    grads.push_back(std::move(g));
  }
  return grads;
}

absl::StatusOr<BatchGradient> AccumulateGradients(const Tensor2& batch,
                                                  const Tensor2& targets,
                                                  std::span<const LayerParams> layers,
                                                  const Loss& loss,
                                                  const SampleScale& scale) {
  FEDAUDIT_ASSIGN_OR_RETURN(Backward bw, Backpropagate(batch, targets, layers, loss));
  const size_t n = batch.rows();
  BatchGradient out;
  out.sum = ZerosLike(layers);
  out.losses = std::move(bw.losses);

  std::vector<double> factor(n, 1.0);
  if (scale) {
    out.norms.resize(n);
    for (size_t b = 0; b < n; ++b) {
      double sq = 0.0;
      for (size_t l = 0; l < layers.size(); ++l) {
        const double d2 = SquaredNorm(bw.delta[l].row(b));
        const double a2 = SquaredNorm(bw.cache.LayerInput(l).row(b));
        sq += d2 * (a2 + 1.0);
      }
      out.norms[b] = std::sqrt(sq);
      factor[b] = scale(out.norms[b]);
    }
  }

  std::vector<size_t> nonzero;
  for (size_t l = 0; l < layers.size(); ++l) {
    LayerGradient& g = out.sum[l];
    const Tensor2& input = bw.cache.LayerInput(l);
    for (size_t b = 0; b < n; ++b) {
      const auto d = bw.delta[l].row(b);
      const auto a = input.row(b);
      nonzero.clear();
      for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] != 0.0) nonzero.push_back(i);
      }
      const bool sparse = nonzero.size() * 4 < a.size();
      for (size_t o = 0; o < d.size(); ++o) {
        const double alpha = d[o] * factor[b];
        g.bias[o] += alpha;
        if (alpha == 0.0) continue;
        auto w = g.weights.row(o);
        if (sparse) {
          for (size_t i : nonzero) w[i] += alpha * a[i];
        } else {
          Axpy(alpha, a, w);
        }
      }
    }
  }
  return out;
}

}  // namespace fedaudit::nn
