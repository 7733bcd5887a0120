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

#include "fedaudit/nn/rng.h"

#include <array>
#include <cmath>
#include <cstddef>

namespace fedaudit::nn {
namespace {

uint64_t SplitMix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Layer boundaries of the ziggurat for the unnormalised density
// exp(-x^2 / 2): x[0] is the base strip's virtual width, x[1] = r, x[128] = 0.
struct Ziggurat {
  static constexpr size_t kLayers = 128;
  static constexpr double kR = 3.442619855899;
  static constexpr double kV = 9.91256303526217e-3;
  std::array<double, kLayers + 1> x;
  std::array<double, kLayers> ratio;

  Ziggurat() {
    double f = std::exp(-0.5 * kR * kR);
    x[0] = kV / f;
    x[1] = kR;
    x[kLayers] = 0.0;
    for (size_t i = 2; i < kLayers; ++i) {
      x[i] = std::sqrt(-2.0 * std::log(kV / x[i - 1] + f));
      f = std::exp(-0.5 * x[i] * x[i]);
    }
    for (size_t i = 0; i < kLayers; ++i) ratio[i] = x[i + 1] / x[i];
  }
};

const Ziggurat& GetZiggurat() {
  static const Ziggurat z;
  return z;
}

}  // namespace

double Rng::Uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

uint64_t Rng::UniformIndex(uint64_t n) {
  // Largest multiple of n representable; draws above it are rejected.
  const uint64_t limit = UINT64_MAX - (UINT64_MAX % n);
  uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % n;
}

double Rng::Gaussian() {
  const Ziggurat& z = GetZiggurat();
  for (;;) {
    const uint64_t bits = engine_();
    // Top 53 bits give u in [-1, 1); the low 7 bits pick the layer.
    const double u = 2.0 * (static_cast<double>(bits >> 11) * 0x1.0p-53) - 1.0;
    const size_t i = bits & (Ziggurat::kLayers - 1);
    if (std::fabs(u) < z.ratio[i]) return u * z.x[i];
    if (i == 0) {
      // Tail beyond r.
      double a, b;
      do {
        a = std::log(UniformOpenLeft()) / Ziggurat::kR;
        b = std::log(UniformOpenLeft());
      } while (-2.0 * b < a * a);
      return u < 0.0 ? a - Ziggurat::kR : Ziggurat::kR - a;
    }
    const double x = u * z.x[i];
    const double f0 = std::exp(-0.5 * (z.x[i] * z.x[i] - x * x));
    const double f1 = std::exp(-0.5 * (z.x[i + 1] * z.x[i + 1] - x * x));
    if (f1 + Uniform() * (f0 - f1) < 1.0) return x;
  }
}

uint64_t DeriveSeed(uint64_t seed, std::initializer_list<uint64_t> parts) {
  uint64_t h = SplitMix64(seed);
  for (uint64_t p : parts) h = SplitMix64(h ^ SplitMix64(p + 0x632be59bd9b4e019ULL));
  return h;
}

}  // namespace fedaudit::nn
