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

#ifndef FEDAUDIT_SRC_IO_BINARY_IO_H_
#define FEDAUDIT_SRC_IO_BINARY_IO_H_

#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <span>

namespace fedaudit::io {

// Little-endian encoding of 64-bit words regardless of host byte order.
inline void WriteU64(std::ostream& out, uint64_t v) {
  char bytes[8];
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(bytes, 8);
}

inline bool ReadU64(std::istream& in, uint64_t* v) {
  unsigned char bytes[8];
  if (!in.read(reinterpret_cast<char*>(bytes), 8)) return false;
  *v = 0;
  for (int i = 0; i < 8; ++i) *v |= static_cast<uint64_t>(bytes[i]) << (8 * i);
  return true;
}

inline void WriteDoubles(std::ostream& out, std::span<const double> values) {
  for (double d : values) WriteU64(out, std::bit_cast<uint64_t>(d));
}

inline bool ReadDoubles(std::istream& in, std::span<double> values) {
  for (double& d : values) {
    uint64_t bits;
    if (!ReadU64(in, &bits)) return false;
    d = std::bit_cast<double>(bits);
  }
  return true;
}

}  // namespace fedaudit::io

#endif  // FEDAUDIT_SRC_IO_BINARY_IO_H_
