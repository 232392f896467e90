// Copyright 2026 The Coltype Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef COLTYPE_TABLE_H_
#define COLTYPE_TABLE_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"

namespace coltype {

enum class Primitive { kNumeric, kText, kDate, kBoolean, kEmpty };

std::string_view PrimitiveName(Primitive primitive);

struct Column {
  std::string header;
  std::vector<std::string> values;  // "" marks a missing cell.
  Primitive primitive = Primitive::kEmpty;
};

struct Table {
  std::string table_id;
  std::string name;
  std::vector<std::string> headers;
  std::vector<Column> columns;

  size_t num_rows() const {
    return columns.empty() ? 0 : columns.front().values.size();
  }
};

// A table from a source or labeled corpus: one annotation per column, "" when
// the column carries none.
struct AnnotatedTable {
  Table table;
  std::vector<std::string> annotations;

  std::string_view annotation(size_t column) const {
    return column < annotations.size() ? std::string_view(annotations[column])
                                       : std::string_view();
  }
};

struct CsvOptions {
  char delimiter = ',';
  bool has_header = true;
  size_t max_rows = 10000;
};

// Status payload key carrying the byte offset of a CSV parse error.
inline constexpr std::string_view kCsvOffsetPayload = "coltype.csv_offset";

// RFC 4180 parsing with a configurable delimiter. Ragged rows are padded with
// missing cells; rows past max_rows are dropped; blank lines are skipped.
// Invalid UTF-8 is replaced with U+FFFD before parsing.
absl::StatusOr<Table> ParseCsv(std::string_view bytes,
                               const CsvOptions& options = {});

// Returns the byte offset attached to a ParseCsv error, if any.
std::optional<int64_t> CsvErrorOffset(const absl::Status& status);

// Decimal number with optional thousands separators ("1,234.5"). Rejects
// inf/nan and anything with trailing garbage.
std::optional<double> ParseDecimal(std::string_view text);
bool LooksLikeDate(std::string_view text);
bool LooksLikeBoolean(std::string_view text);

// Parse-rate thresholds over non-missing values: boolean >= 95%, then date
// >= 80%, then numeric >= 80%, else text. All-missing columns are empty.
Primitive InferPrimitive(const Column& column);

struct NumericStats {
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
  double std = 0.0;  // Population standard deviation.
  double fraction_integer = 0.0;
};

enum CharClass { kDigit = 0, kAlpha, kPunct, kSpace, kOther, kNumCharClasses };

struct TextStats {
  double mean_length = 0.0;  // In code points.
  std::vector<double> char_class_histogram =
      std::vector<double>(kNumCharClasses, 0.0);  // Fractions summing to 1.
};

struct ColumnProfile {
  size_t n_rows = 0;
  size_t n_missing = 0;
  size_t n_unique = 0;
  // Descending by count, ties lexicographic, at most 10 entries.
  std::vector<std::pair<std::string, size_t>> top_values;
  std::optional<NumericStats> numeric_stats;  // Iff primitive is numeric.
  std::optional<TextStats> text_stats;        // Iff any value is present.

  size_t n_present() const { return n_rows - n_missing; }
  double unique_ratio() const {
    return n_present() == 0 ? 0.0
                            : static_cast<double>(n_unique) /
                                  static_cast<double>(n_present());
  }
};

inline constexpr size_t kMaxTopValues = 10;

ColumnProfile ProfileColumn(const Column& column);

}  // namespace coltype

#endif  // COLTYPE_TABLE_H_
