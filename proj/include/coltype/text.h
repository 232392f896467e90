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

#ifndef COLTYPE_TEXT_H_
#define COLTYPE_TEXT_H_

#include <charconv>
#include <cstdint>
#include <iterator>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <fmt/format.h>

namespace coltype {

// Replaces every invalid UTF-8 sequence with U+FFFD.
std::string SanitizeUtf8(std::string_view bytes);

// Decodes (already sanitized) UTF-8 into code points.
std::u32string DecodeUtf8(std::string_view text);

std::string AsciiLower(std::string_view text);
std::string_view TrimWhitespace(std::string_view text);

// Canonical form for header and type-name comparison: camelCase is split,
// ASCII is lowercased, and runs of '_', '-', '.' and whitespace collapse into
// one space. Leading/trailing separators are dropped.
std::string NormalizeName(std::string_view name);

// Space-separated tokens of NormalizeName(name).
std::vector<std::string> Tokenize(std::string_view name);

// Concatenates the fmt renderings of `args`.
template <typename... Args>
std::string StrCat(const Args&... args) {
  std::string out;
  (fmt::format_to(std::back_inserter(out), "{}", args), ...);
  return out;
}

// Splits on `sep`, keeping empty pieces. Views point into `text`.
std::vector<std::string_view> Split(std::string_view text, char sep);
// Splits on `sep` into at most `max_pieces` pieces.
std::vector<std::string_view> SplitN(std::string_view text, char sep,
                                     size_t max_pieces);
// Splits on runs of spaces/tabs, dropping empty pieces.
std::vector<std::string_view> SplitWhitespace(std::string_view text);

template <typename Int>
std::optional<Int> ParseInt(std::string_view text) {
  Int value{};
  auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    return std::nullopt;
  }
  return value;
}

// 64-bit FNV-1a. Stable across platforms, used to derive sampling seeds.
uint64_t Fnv1a64(std::string_view data);

}  // namespace coltype

#endif  // COLTYPE_TEXT_H_
