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

#ifndef FEDAUDIT_ERRORS_H_
#define FEDAUDIT_ERRORS_H_

#include "absl/strings/string_view.h"

#include "absl/status/status.h"

// Error constructors shared by all modules. Each maps a failure family onto a
// canonical absl status code so callers (notably the command line front-end)
// can classify failures without parsing messages:
//
//   shape / config / usage  -> kInvalidArgument
//   schema / data / parse   -> kFailedPrecondition
//   numeric (NaN, Inf)      -> kOutOfRange
//   federation / partition  -> kAborted
namespace fedaudit {

absl::Status ShapeError(absl::string_view message);
absl::Status ConfigError(absl::string_view message);
absl::Status DataError(absl::string_view message);
absl::Status NumericError(absl::string_view message);
absl::Status FederationError(absl::string_view message);

}  // namespace fedaudit

#endif  // FEDAUDIT_ERRORS_H_
