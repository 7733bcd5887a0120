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

#ifndef FEDAUDIT_UTIL_FNV_H_
#define FEDAUDIT_UTIL_FNV_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace fedaudit::util {

inline constexpr uint64_t kFnvOffset = 14695981039346656037ull;
inline constexpr uint64_t kFnvPrime = 1099511628211ull;

// 64-bit FNV-1a, continuing from `hash`.
uint64_t Fnv1a64(std::string_view bytes, uint64_t hash = kFnvOffset);
// Hashes the little-endian bit patterns of `values`.
uint64_t Fnv1a64(std::span<const double> values, uint64_t hash = kFnvOffset);

// 16 lowercase hex digits.
std::string HexDigest(uint64_t hash);

}  // namespace fedaudit::util

#endif  // FEDAUDIT_UTIL_FNV_H_
