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

#ifndef FEDAUDIT_NN_OPTIMIZER_H_
#define FEDAUDIT_NN_OPTIMIZER_H_

#include <cstdint>
#include <span>

#include "absl/status/status.h"
#include "fedaudit/nn/backprop.h"
#include "fedaudit/nn/layer.h"

namespace fedaudit::nn {

enum class OptimizerKind { kAdam, kSgd };

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::kAdam;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  friend bool operator==(const OptimizerConfig&, const OptimizerConfig&) = default;
};

absl::Status ValidateOptimizer(const OptimizerConfig& config);

// Adam moments (unused for plain SGD). m and v mirror the parameter shapes;
// `step` counts applied updates.
struct OptimizerState {
  OptimizerConfig config;
  Gradients m;
  Gradients v;
  int64_t step = 0;
};

OptimizerState InitOptimizer(std::span<const LayerParams> layers,
                             const OptimizerConfig& config);

// One descent step on `layers` with gradient `grads`. For Adam the step
// counter is incremented before bias correction:
//   m <- b1 m + (1-b1) g,  v <- b2 v + (1-b2) g^2
//   w <- w - lr * (m / (1-b1^t)) / (sqrt(v / (1-b2^t)) + eps)
// For SGD: w <- w - lr g.
absl::Status ApplyUpdate(std::span<LayerParams> layers, const Gradients& grads,
                         OptimizerState& state);

}  // namespace fedaudit::nn

#endif  // FEDAUDIT_NN_OPTIMIZER_H_
