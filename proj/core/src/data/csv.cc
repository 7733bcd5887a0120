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

#include "fedaudit/data/csv.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "fedaudit/errors.h"
#include "fedaudit/status_macros.h"

namespace fedaudit::data {
namespace {

std::string Trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

bool ParseDouble(const std::string& raw, double* out) {
  const std::string s = Trim(raw);
  if (s.empty()) return false;
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  if (*begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, *out);
  return ec == std::errc() && ptr == end && std::isfinite(*out);
}

}  // namespace

absl::StatusOr<CsvTable> ParseCsv(const std::string& text) {
  CsvTable table;
  std::vector<std::string> row;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  size_t line = 1;
  size_t i = 0;
  if (text.rfind("\xEF\xBB\xBF", 0) == 0) i = 3;

  auto end_row = [&] {
    row.push_back(std::move(field));
    field.clear();
    field_started = false;
    const bool blank = row.size() == 1 && row[0].empty();
    if (!blank) {
      if (table.header.empty()) {
        table.header = std::move(row);
      } else {
        table.rows.push_back(std::move(row));
      }
    }
    row.clear();
  };

  for (; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (field_started && !field.empty()) {
          return DataError(absl::StrFormat("line %d: stray quote inside field", line));
        }
        in_quotes = true;
        field_started = true;
        break;
      case ',':
        row.push_back(std::move(field));
        field.clear();
        field_started = false;
        break;
      case '\r':
        break;
      case '\n':
        end_row();
        ++line;
        break;
      default:
        field.push_back(c);
        field_started = true;
    }
  }
  if (in_quotes) return DataError("unterminated quoted field at end of input");
  if (field_started || !field.empty() || !row.empty()) end_row();
  if (table.header.empty()) return DataError("file has no header row");
  return table;
}

absl::StatusOr<CsvTable> ReadCsvFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return DataError(absl::StrCat("cannot open '", path, "'"));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ParseCsv(buffer.str());
}

absl::StatusOr<RawDataset> FromCsvTable(const CsvTable& table, const DatasetSchema& schema) {
  FEDAUDIT_RETURN_IF_ERROR(ValidateSchema(schema));
  std::unordered_map<std::string, size_t> column;
  for (size_t c = 0; c < table.header.size(); ++c) column.emplace(Trim(table.header[c]), c);
  auto lookup = [&](const std::string& name) -> absl::StatusOr<size_t> {
    auto it = column.find(name);
    if (it == column.end()) {
      return DataError(absl::StrCat("schema error: missing column '", name, "'"));
    }
    return it->second;
  };

  std::vector<size_t> cat_cols, num_cols;
  for (const auto& name : schema.categorical) {
    FEDAUDIT_ASSIGN_OR_RETURN(size_t c, lookup(name));
    cat_cols.push_back(c);
  }
  for (const auto& name : schema.numeric) {
    FEDAUDIT_ASSIGN_OR_RETURN(size_t c, lookup(name));
    num_cols.push_back(c);
  }
  FEDAUDIT_ASSIGN_OR_RETURN(size_t dept_col, lookup(schema.department));

  RawDataset data;
  data.schema = schema;
  data.records.reserve(table.rows.size());
  for (size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    // Data rows are numbered from 2; row 1 is the header.
    const size_t row_number = r + 2;
    if (row.size() != table.header.size()) {
      return DataError(absl::StrFormat("row %d: expected %d fields, found %d", row_number,
                                       table.header.size(), row.size()));
    }
    Record rec;
    rec.categorical.reserve(cat_cols.size());
    for (size_t c : cat_cols) rec.categorical.push_back(row[c]);
    rec.numeric.reserve(num_cols.size());
    for (size_t k = 0; k < num_cols.size(); ++k) {
      double v;
      if (!ParseDouble(row[num_cols[k]], &v)) {
        return DataError(absl::StrFormat("row %d, column '%s': cannot parse '%s' as a number",
                                         row_number, schema.numeric[k], row[num_cols[k]]));
      }
      rec.numeric.push_back(v);
    }
    data.records.push_back(std::move(rec));
    data.departments.push_back(row[dept_col]);
  }
  data.labels.assign(data.records.size(), Label::kNormal);
  return data;
}

absl::StatusOr<RawDataset> LoadCsv(const std::string& path, const DatasetSchema& schema) {
  FEDAUDIT_ASSIGN_OR_RETURN(CsvTable table, ReadCsvFile(path));
  return FromCsvTable(table, schema);
}

std::string QuoteCsvField(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

absl::Status WriteCsv(const RawDataset& data, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return DataError(absl::StrCat("cannot write '", path, "'"));
  const auto& schema = data.schema;
  const bool dept_is_cat = std::find(schema.categorical.begin(), schema.categorical.end(),
                                     schema.department) != schema.categorical.end();
  std::vector<std::string> header;
  if (!dept_is_cat) header.push_back(schema.department);
  header.insert(header.end(), schema.categorical.begin(), schema.categorical.end());
  header.insert(header.end(), schema.numeric.begin(), schema.numeric.end());
  header.push_back("label");
  for (size_t c = 0; c < header.size(); ++c) {
    out << (c ? "," : "") << QuoteCsvField(header[c]);
  }
  out << '\n';
  for (size_t r = 0; r < data.size(); ++r) {
    bool first = true;
    auto emit = [&](const std::string& s) {
      out << (first ? "" : ",") << QuoteCsvField(s);
      first = false;
    };
    if (!dept_is_cat) emit(data.departments[r]);
    for (const auto& v : data.records[r].categorical) emit(v);
    for (double v : data.records[r].numeric) emit(absl::StrFormat("%.17g", v));
    emit(std::string(LabelName(data.labels[r])));
    out << '\n';
  }
  if (!out) return DataError(absl::StrCat("write failed for '", path, "'"));
  return absl::OkStatus();
}

}  // namespace fedaudit::data
