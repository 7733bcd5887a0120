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

#ifndef FEDAUDIT_STATUS_MACROS_H_
#define FEDAUDIT_STATUS_MACROS_H_

#include "absl/status/status.h"
#include "absl/status/statusor.h"

#define FEDAUDIT_CONCAT_IMPL_(x, y) x##y
#define FEDAUDIT_CONCAT_(x, y) FEDAUDIT_CONCAT_IMPL_(x, y)

#define FEDAUDIT_RETURN_IF_ERROR(expr)          \
  do {                                          \
    const ::absl::Status _status = (expr);      \
    if (!_status.ok()) return _status;          \
  } while (0)

#define FEDAUDIT_ASSIGN_OR_RETURN_IMPL_(tmp, lhs, expr) \
  auto tmp = (expr);                                    \
  if (!tmp.ok()) return tmp.status();                   \
  lhs = std::move(tmp).value()

#define FEDAUDIT_ASSIGN_OR_RETURN(lhs, expr) \
  FEDAUDIT_ASSIGN_OR_RETURN_IMPL_(           \
      FEDAUDIT_CONCAT_(_statusor_, __LINE__), lhs, expr)

#endif  // FEDAUDIT_STATUS_MACROS_H_
