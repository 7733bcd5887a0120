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

#ifndef FEDAUDIT_UTIL_PARALLEL_H_
#define FEDAUDIT_UTIL_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace fedaudit::util {

// Calls fn(0..n-1) on up to `jobs` threads. Each index runs exactly once;
// jobs <= 1 runs inline in index order.
void ParallelFor(size_t n, size_t jobs, const std::function<void(size_t)>& fn);

}  // namespace fedaudit::util

#endif  // FEDAUDIT_UTIL_PARALLEL_H_
