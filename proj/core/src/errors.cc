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

#include "fedaudit/errors.h"

#include "absl/strings/str_cat.h"

namespace fedaudit {

absl::Status ShapeError(absl::string_view message) {
  return absl::InvalidArgumentError(absl::StrCat("shape error: ", message));
}

absl::Status ConfigError(absl::string_view message) {
  return absl::InvalidArgumentError(absl::StrCat("config error: ", message));
}

absl::Status DataError(absl::string_view message) {
  return absl::FailedPreconditionError(absl::StrCat("data error: ", message));
}

absl::Status NumericError(absl::string_view message) {
  return absl::OutOfRangeError(absl::StrCat("numeric error: ", message));
}

absl::Status FederationError(absl::string_view message) {
  return absl::AbortedError(absl::StrCat("federation error: ", message));
}

}  // namespace fedaudit
