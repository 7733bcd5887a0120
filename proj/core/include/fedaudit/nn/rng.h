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

#ifndef FEDAUDIT_NN_RNG_H_
#define FEDAUDIT_NN_RNG_H_

#include <cstdint>
#include <initializer_list>
#include <random>

namespace fedaudit::nn {

// Seeded pseudo random source. Built on std::mt19937_64, whose output
// sequence is fixed by the standard; all derived draws are computed here
// rather than through <random> distributions so that streams are identical
// across standard library implementations.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t NextU64() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  double Uniform();
  // Uniform in (0, 1].
  double UniformOpenLeft() { return 1.0 - Uniform(); }
  // Uniform in [lo, hi).
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }
  // Uniform integer in [0, n); n must be > 0. Rejection sampling, unbiased.
  uint64_t UniformIndex(uint64_t n);
  // Standard normal (128-layer ziggurat). Usually consumes one 64-bit draw.
  double Gaussian();

 private:
  std::mt19937_64 engine_;
};

// Mixes a base seed with stream coordinates (client id, round, ...) into an
// independent seed. Stable across platforms and runs.
uint64_t DeriveSeed(uint64_t seed, std::initializer_list<uint64_t> parts);

}  // namespace fedaudit::nn

#endif  // FEDAUDIT_NN_RNG_H_
