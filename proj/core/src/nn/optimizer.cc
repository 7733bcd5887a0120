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

#include "fedaudit/nn/optimizer.h"

#include <cmath>

#include "fedaudit/errors.h"

namespace fedaudit::nn {

absl::Status ValidateOptimizer(const OptimizerConfig& config) {
  if (!(config.learning_rate > 0.0)) return ConfigError("learning rate must be > 0");
  if (config.kind == OptimizerKind::kAdam) {
    if (!(config.beta1 > 0.0 && config.beta1 < 1.0)) {
      return ConfigError("beta1 must lie in (0, 1)");
    }
    if (!(config.beta2 > 0.0 && config.beta2 < 1.0)) {
      return ConfigError("beta2 must lie in (0, 1)");
    }
    if (!(config.epsilon > 0.0)) return ConfigError("epsilon must be > 0");
  }
  return absl::OkStatus();
}

OptimizerState InitOptimizer(std::span<const LayerParams> layers,
                             const OptimizerConfig& config) {
  OptimizerState state;
  state.config = config;
  if (config.kind == OptimizerKind::kAdam) {
    state.m = ZerosLike(layers);
    state.v = ZerosLike(layers);
  }
  return state;
}

namespace {

bool Matches(std::span<const LayerParams> layers, const Gradients& g) {
  if (layers.size() != g.size()) return false;
  for (size_t l = 0; l < layers.size(); ++l) {
    if (!layers[l].weights.SameShape(g[l].weights) ||
        layers[l].bias.size() != g[l].bias.size()) {
      return false;
    }
  }
  return true;
}

void AdamUpdate(std::span<double> w, std::span<const double> g, std::span<double> m,
                std::span<double> v, const OptimizerConfig& c, double correction1,
                double correction2) {
  for (size_t i = 0; i < w.size(); ++i) {
    m[i] = c.beta1 * m[i] + (1.0 - c.beta1) * g[i];
    v[i] = c.beta2 * v[i] + (1.0 - c.beta2) * g[i] * g[i];
    const double m_hat = m[i] / correction1;
    const double v_hat = v[i] / correction2;
    w[i] -= c.learning_rate * m_hat / (std::sqrt(v_hat) + c.epsilon);
  }
}

}  // namespace

absl::Status ApplyUpdate(std::span<LayerParams> layers, const Gradients& grads,
                         OptimizerState& state) {
  if (!Matches(layers, grads)) return ShapeError("gradients do not match parameters");
  const OptimizerConfig& c = state.config;
  if (c.kind == OptimizerKind::kSgd) {
    for (size_t l = 0; l < layers.size(); ++l) {
      auto w = layers[l].weights.values();
      const auto g = grads[l].weights.values();
      for (size_t i = 0; i < w.size(); ++i) w[i] -= c.learning_rate * g[i];
      for (size_t i = 0; i < layers[l].bias.size(); ++i) {
        layers[l].bias[i] -= c.learning_rate * grads[l].bias[i];
      }
    }
    ++state.step;
    return absl::OkStatus();
  }

  if (!Matches(layers, state.m) || !Matches(layers, state.v)) {
    return ShapeError("optimizer moments do not match parameters");
  }
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double correction1 = 1.0 - std::pow(c.beta1, t);
  const double correction2 = 1.0 - std::pow(c.beta2, t);
  for (size_t l = 0; l < layers.size(); ++l) {
    AdamUpdate(layers[l].weights.values(), grads[l].weights.values(),
               state.m[l].weights.values(), state.v[l].weights.values(), c, correction1,
               correction2);
    AdamUpdate(layers[l].bias, grads[l].bias, state.m[l].bias, state.v[l].bias, c,
               correction1, correction2);
  }
  return absl::OkStatus();
}

}  // namespace fedaudit::nn
