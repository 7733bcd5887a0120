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

#ifndef FEDAUDIT_TESTS_ORACLES_FINITE_DIFFERENCE_H_
#define FEDAUDIT_TESTS_ORACLES_FINITE_DIFFERENCE_H_

#include <algorithm>
#include <cmath>
#include <vector>

#include "fedaudit/nn/backprop.h"
#include "fedaudit/nn/layer.h"
#include "fedaudit/nn/rng.h"

// Test-only gradient oracle: central differences of one sample's loss,
// evaluated with a plain forward pass. Shares no code with backprop.
namespace fedaudit::testing {

inline double SampleLoss(const std::vector<nn::LayerParams>& layers,
                         std::span<const double> x, std::span<const double> t,
                         const nn::Loss& loss) {
  std::vector<double> a(x.begin(), x.end());
  for (const auto& layer : layers) {
    std::vector<double> next(layer.out_dim());
    for (size_t o = 0; o < layer.out_dim(); ++o) {
      double z = layer.bias[o];
      for (size_t i = 0; i < layer.in_dim(); ++i) z += layer.weights(o, i) * a[i];
      next[o] = layer.activation.Apply(z);
    }
    a = std::move(next);
  }
  std::vector<double> grad(a.size());
  return loss.Evaluate(a, t, grad);
}

inline nn::Gradients FiniteDifferenceGradient(std::vector<nn::LayerParams> layers,
                                              std::span<const double> x,
                                              std::span<const double> t,
                                              const nn::Loss& loss, double h = 1e-5) {
  nn::Gradients g = nn::ZerosLike(layers);
  auto central = [&](double& p) {
    const double saved = p;
    p = saved + h;
    const double up = SampleLoss(layers, x, t, loss);
    p = saved - h;
    const double down = SampleLoss(layers, x, t, loss);
    p = saved;
    return (up - down) / (2.0 * h);
  };
  for (size_t l = 0; l < layers.size(); ++l) {
    for (size_t o = 0; o < layers[l].out_dim(); ++o) {
      for (size_t i = 0; i < layers[l].in_dim(); ++i) {
        g[l].weights(o, i) = central(layers[l].weights(o, i));
      }
      g[l].bias[o] = central(layers[l].bias[o]);
    }
  }
  return g;
}

// Max over coordinates of |a - b| / max(|a|, |b|, floor).
inline double MaxRelativeError(const nn::Gradients& a, const nn::Gradients& b,
                               double floor = 1e-6) {
  double worst = 0.0;
  auto update = [&](double x, double y) {
    const double denom = std::max({std::abs(x), std::abs(y), floor});
    worst = std::max(worst, std::abs(x - y) / denom);
  };
  for (size_t l = 0; l < a.size(); ++l) {
    for (size_t k = 0; k < a[l].weights.size(); ++k) {
      update(a[l].weights.values()[k], b[l].weights.values()[k]);
    }
    for (size_t k = 0; k < a[l].bias.size(); ++k) update(a[l].bias[k], b[l].bias[k]);
  }
  return worst;
}

// Random chain of dense layers with the given widths; biases are randomised
// too so that gradient checks cover them.
inline std::vector<nn::LayerParams> RandomNet(const std::vector<size_t>& widths,
                                              nn::Rng& rng, bool tanh_last = true) {
  std::vector<nn::LayerParams> layers;
  for (size_t l = 0; l + 1 < widths.size(); ++l) {
    const bool last = l + 2 == widths.size();
    auto act = last && tanh_last ? nn::Activation::Tanh() : nn::Activation::LeakyRelu(0.4);
    auto layer = nn::InitLayer(widths[l], widths[l + 1], act, rng);
    for (double& b : layer.bias) b = rng.Uniform(-0.5, 0.5);
    layers.push_back(std::move(layer));
  }
  return layers;
}

inline nn::Tensor2 RandomTensor(size_t rows, size_t cols, nn::Rng& rng, double lo = -1.0,
                                double hi = 1.0) {
  nn::Tensor2 t(rows, cols);
  for (double& v : t.values()) v = rng.Uniform(lo, hi);
  return t;
}

}  // namespace fedaudit::testing

#endif  // FEDAUDIT_TESTS_ORACLES_FINITE_DIFFERENCE_H_
