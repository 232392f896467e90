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

#include "coltype/table.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>

#include "absl/status/status.h"
#include "absl/strings/cord.h"
#include "coltype/text.h"

namespace coltype {

namespace {

constexpr double kNumericThreshold = 0.8;
constexpr double kDateThreshold = 0.8;
constexpr double kBooleanThreshold = 0.95;

bool AllDigits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return c >= '0' && c <= '9';
  });
}

// Splits "a<sep>b<sep>c" into exactly three all-digit parts.
bool ThreeNumericParts(std::string_view s, char sep, size_t* a, size_t* b,
                       size_t* c, int* x, int* y, int* z) {
  const size_t p1 = s.find(sep);
  if (p1 == std::string_view::npos) return false;
  const size_t p2 = s.find(sep, p1 + 1);
  if (p2 == std::string_view::npos || s.find(sep, p2 + 1) != s.npos) {
    return false;
  }
  const std::string_view s1 = s.substr(0, p1);
  const std::string_view s2 = s.substr(p1 + 1, p2 - p1 - 1);
  const std::string_view s3 = s.substr(p2 + 1);
  if (!AllDigits(s1) || !AllDigits(s2) || !AllDigits(s3)) return false;
  *a = s1.size();
  *b = s2.size();
  *c = s3.size();
  const auto px = ParseInt<int>(s1);
  const auto py = ParseInt<int>(s2);
  const auto pz = ParseInt<int>(s3);
  if (!px || !py || !pz) return false;
  *x = *px;
  *y = *py;
  *z = *pz;
  return true;
}

bool ValidDay(int month, int day) {
  return month >= 1 && month <= 12 && day >= 1 && day <= 31;
}

int CharClassOf(char32_t cp) {
  if (cp >= '0' && cp <= '9') return kDigit;
  if ((cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z')) return kAlpha;
  if (cp == ' ' || cp == '\t' || cp == '\n' || cp == '\r') return kSpace;
  if (cp < 0x80 && cp > 0x20 && cp != 0x7F) return kPunct;
  return kOther;
}

absl::Status CsvError(std::string_view message, size_t offset) {
  absl::Status status = absl::InvalidArgumentError(
      StrCat(message, " at byte offset ", offset));
  status.SetPayload(std::string(kCsvOffsetPayload), absl::Cord(StrCat(offset)));
  return status;
}

}  // namespace

std::string_view PrimitiveName(Primitive primitive) {
  switch (primitive) {
    case Primitive::kNumeric:
      return "numeric";
    case Primitive::kText:
      return "text";
    case Primitive::kDate:
      return "date";
    case Primitive::kBoolean:
      return "boolean";
    case Primitive::kEmpty:
      return "empty";
  }
  return "empty";
}

std::optional<double> ParseDecimal(std::string_view text) {
  text = TrimWhitespace(text);
  if (text.empty()) return std::nullopt;
  std::string cleaned;
  cleaned.reserve(text.size());
  for (char c : text) {
    if (c != ',') cleaned.push_back(c);
  }
  size_t start = 0;
  if (cleaned[0] == '+') start = 1;
  bool has_digit = false;
  for (size_t i = start; i < cleaned.size(); ++i) {
    const char c = cleaned[i];
    if (c >= '0' && c <= '9') {
      has_digit = true;
    } else if (c != '.' && c != '-' && c != 'e' && c != 'E' && c != '+') {
      return std::nullopt;
    }
  }
  if (!has_digit) return std::nullopt;
  double value = 0.0;
  const char* begin = cleaned.data() + start;
  const char* end = cleaned.data() + cleaned.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

bool LooksLikeDate(std::string_view text) {
  text = TrimWhitespace(text);
  // Optional time part after 'T' or a space: "2021-01-01T10:00:00".
  const size_t cut = text.find_first_of("T ");
  if (cut != std::string_view::npos) text = text.substr(0, cut);
  size_t la, lb, lc;
  int x, y, z;
  if (ThreeNumericParts(text, '-', &la, &lb, &lc, &x, &y, &z) ||
      ThreeNumericParts(text, '/', &la, &lb, &lc, &x, &y, &z)) {
    // YYYY-MM-DD or YYYY/MM/DD
    if (la == 4 && lb <= 2 && lc <= 2) return ValidDay(y, z);
    // MM/DD/YYYY or MM-DD-YYYY
    if (la <= 2 && lb <= 2 && lc == 4) return ValidDay(x, y);
  }
  return false;
}

bool LooksLikeBoolean(std::string_view text) {
  const std::string lower = AsciiLower(TrimWhitespace(text));
  return lower == "true" || lower == "false" || lower == "0" ||
         lower == "1" || lower == "yes" || lower == "no";
}

Primitive InferPrimitive(const Column& column) {
  size_t present = 0;
  size_t numeric = 0;
  size_t dates = 0;
  size_t booleans = 0;
  for (const std::string& value : column.values) {
    if (value.empty()) continue;
    ++present;
    if (ParseDecimal(value).has_value()) ++numeric;
    if (LooksLikeDate(value)) ++dates;
    if (LooksLikeBoolean(value)) ++booleans;
  }
  if (present == 0) return Primitive::kEmpty;
  const double n = static_cast<double>(present);
  if (booleans / n >= kBooleanThreshold) return Primitive::kBoolean;
  if (dates / n >= kDateThreshold) return Primitive::kDate;
  if (numeric / n >= kNumericThreshold) return Primitive::kNumeric;
  return Primitive::kText;
}

std::optional<int64_t> CsvErrorOffset(const absl::Status& status) {
  auto payload = status.GetPayload(std::string(kCsvOffsetPayload));
  if (!payload.has_value()) return std::nullopt;
  return ParseInt<int64_t>(std::string(*payload));
}

absl::StatusOr<Table> ParseCsv(std::string_view bytes,
                               const CsvOptions& options) {
  const std::string text = SanitizeUtf8(bytes);
  const char delim = options.delimiter;
  if (delim == '"' || delim == '\n' || delim == '\r') {
    return absl::InvalidArgumentError("invalid CSV delimiter");
  }

  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;  // Row has content (blank lines are skipped).
  size_t quote_start = 0;
  const size_t limit = options.max_rows + (options.has_header ? 1 : 0);

  auto end_row = [&]() {
    if (field_started || !row.empty()) {
      row.push_back(std::move(field));
      rows.push_back(std::move(row));
    }
    row.clear();
    field.clear();
    field_started = false;
  };

  size_t i = 0;
  for (; i < text.size() && rows.size() < limit; ++i) {
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
        field.push_back(c);
      }
      continue;
    }
    if (c == '"' && field.empty()) {
      in_quotes = true;
      field_started = true;
      quote_start = i;
    } else if (c == delim) {
      row.push_back(std::move(field));
      field.clear();
      field_started = true;
    } else if (c == '\n') {
      end_row();
    } else if (c == '\r') {
      if (i + 1 < text.size() && text[i + 1] == '\n') ++i;
      end_row();
    } else {
      field.push_back(c);
      field_started = true;
    }
  }
  if (in_quotes) return CsvError("unclosed quote", quote_start);
  if (rows.size() < limit) end_row();

  size_t width = 0;
  for (const auto& r : rows) width = std::max(width, r.size());
  if (width == 0) return absl::InvalidArgumentError("CSV has no columns");

  Table table;
  size_t first_data_row = 0;
  table.headers.assign(width, "");
  if (options.has_header && !rows.empty()) {
    for (size_t c = 0; c < rows[0].size(); ++c) {
      table.headers[c] = std::string(TrimWhitespace(rows[0][c]));
    }
    first_data_row = 1;
  }
  const size_t n_rows =
      std::min(rows.size() - first_data_row, options.max_rows);
  table.columns.resize(width);
  for (size_t c = 0; c < width; ++c) {
    Column& column = table.columns[c];
    column.header = table.headers[c];
    column.values.reserve(n_rows);
    for (size_t r = first_data_row; r < first_data_row + n_rows; ++r) {
      column.values.push_back(c < rows[r].size() ? std::move(rows[r][c])
                                                 : std::string());
    }
    column.primitive = InferPrimitive(column);
  }
  return table;
}

ColumnProfile ProfileColumn(const Column& column) {
  ColumnProfile profile;
  profile.n_rows = column.values.size();
  std::map<std::string_view, size_t> counts;
  for (const std::string& value : column.values) {
    if (value.empty()) {
      ++profile.n_missing;
    } else {
      ++counts[value];
    }
  }
  profile.n_unique = counts.size();

  std::vector<std::pair<std::string_view, size_t>> ordered(counts.begin(),
                                                           counts.end());
  // counts is lexicographic already; stable sort keeps that order in ties.
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const auto& a, const auto& b) {
                     return a.second > b.second;
                   });
  for (size_t i = 0; i < ordered.size() && i < kMaxTopValues; ++i) {
    profile.top_values.emplace_back(std::string(ordered[i].first),
                                    ordered[i].second);
  }

  if (profile.n_present() > 0) {
    TextStats text;
    double total_length = 0.0;
    std::vector<double> class_counts(kNumCharClasses, 0.0);
    double total_chars = 0.0;
    for (const auto& [value, count] : counts) {
      const std::u32string cps = DecodeUtf8(value);
      total_length += static_cast<double>(cps.size() * count);
      for (char32_t cp : cps) {
        class_counts[CharClassOf(cp)] += static_cast<double>(count);
      }
      total_chars += static_cast<double>(cps.size() * count);
    }
    text.mean_length = total_length / static_cast<double>(profile.n_present());
    if (total_chars > 0) {
      for (int k = 0; k < kNumCharClasses; ++k) {
        text.char_class_histogram[k] = class_counts[k] / total_chars;
      }
    }
    profile.text_stats = text;
  }

  if (column.primitive == Primitive::kNumeric) {
    std::vector<double> numbers;
    numbers.reserve(profile.n_present());
    for (const std::string& value : column.values) {
      if (value.empty()) continue;
      if (std::optional<double> v = ParseDecimal(value)) numbers.push_back(*v);
    }
    if (!numbers.empty()) {
      // Sorting first makes the sums independent of row order.
      std::sort(numbers.begin(), numbers.end());
      const double n = static_cast<double>(numbers.size());
      double sum = 0.0;
      size_t integers = 0;
      for (double v : numbers) {
        sum += v;
        if (v == std::floor(v)) ++integers;
      }
      NumericStats stats;
      stats.min = numbers.front();
      stats.max = numbers.back();
      stats.mean = std::clamp(sum / n, stats.min, stats.max);
      double squares = 0.0;
      for (double v : numbers) squares += (v - stats.mean) * (v - stats.mean);
      stats.std = std::sqrt(squares / n);
      stats.fraction_integer = static_cast<double>(integers) / n;
      profile.numeric_stats = stats;
    }
  }
  return profile;
}

}  // namespace coltype
