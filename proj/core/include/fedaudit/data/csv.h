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

#ifndef FEDAUDIT_DATA_CSV_H_
#define FEDAUDIT_DATA_CSV_H_

#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "fedaudit/data/dataset.h"

namespace fedaudit::data {

// Comma separated, UTF-8, first row is the header, fields may be quoted with
// '"' and embedded quotes doubled. CR LF and LF line endings are accepted.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

absl::StatusOr<CsvTable> ParseCsv(const std::string& text);
absl::StatusOr<CsvTable> ReadCsvFile(const std::string& path);

// Loads the schema columns of a payments file. Every record is labelled
// normal. Numeric fields must parse fully as floating point numbers.
absl::StatusOr<RawDataset> LoadCsv(const std::string& path, const DatasetSchema& schema);
absl::StatusOr<RawDataset> FromCsvTable(const CsvTable& table, const DatasetSchema& schema);

// Writes the schema columns (department first when it is not already a
// categorical attribute) followed by a `label` column.
absl::Status WriteCsv(const RawDataset& data, const std::string& path);

std::string QuoteCsvField(const std::string& field);

}  // namespace fedaudit::data

#endif  // FEDAUDIT_DATA_CSV_H_
