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

#ifndef FEDAUDIT_SRC_NN_KERNELS_H_
#define FEDAUDIT_SRC_NN_KERNELS_H_

#include <cstddef>
#include <span>

// Inner loops shared by the dense kernels. The reduction order of Dot is
// fixed for a given build, so identical inputs always give identical bits.
namespace fedaudit::nn {

inline double Dot(std::span<const double> a, std::span<const double> b) {
  const double* pa = a.data();
  const double* pb = b.data();
  const size_t n = a.size();
  double s = 0.0;
#pragma omp simd reduction(+ : s)
  for (size_t i = 0; i < n; ++i) s += pa[i] * pb[i];
  return s;
}

inline double SparseDot(std::span<const double> dense, std::span<const double> x,
                        std::span<const size_t> nonzero) {
  double s = 0.0;
  for (size_t i : nonzero) s += dense[i] * x[i];
  return s;
}

// y += alpha * x
inline void Axpy(double alpha, std::span<const double> x, std::span<double> y) {
  const double* px = x.data();
  double* py = y.data();
  const size_t n = x.size();
#pragma omp simd
  for (size_t i = 0; i < n; ++i) py[i] += alpha * px[i];
}

inline double SquaredNorm(std::span<const double> x) { return Dot(x, x); }

}  // namespace fedaudit::nn

#endif  // FEDAUDIT_SRC_NN_KERNELS_H_
