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

#include "coltype/text.h"

#include <gtest/gtest.h>

namespace coltype {
namespace {

TEST(NormalizeNameTest, LowercasesAndCollapsesSeparators) {
  EXPECT_EQ(NormalizeName("Zip_Code"), "zip code");
  EXPECT_EQ(NormalizeName("  zip--code.. "), "zip code");
  EXPECT_EQ(NormalizeName("e-mail"), "e mail");
  EXPECT_EQ(NormalizeName("___"), "");
}

TEST(NormalizeNameTest, SplitsCamelCase) {
  EXPECT_EQ(NormalizeName("zipCode"), "zip code");
  EXPECT_EQ(NormalizeName("HTTPServer"), "http server");
  EXPECT_EQ(NormalizeName("customerID"), "customer id");
}

TEST(NormalizeNameTest, IsIdempotent) {
  for (const char* name : {"Zip_Code", "HTTPServer", "a.b-c d", "Income"}) {
    const std::string once = NormalizeName(name);
    EXPECT_EQ(NormalizeName(once), once) << name;
  }
}

TEST(TokenizeTest, SplitsNormalizedForm) {
  EXPECT_EQ(Tokenize("Annual_Salary"),
            (std::vector<std::string>{"annual", "salary"}));
  EXPECT_TRUE(Tokenize("--").empty());
}

TEST(Utf8Test, ReplacesInvalidSequences) {
  EXPECT_EQ(SanitizeUtf8("ok"), "ok");
  EXPECT_EQ(SanitizeUtf8("a\xff" "b"), "a\xEF\xBF\xBD" "b");
  EXPECT_EQ(DecodeUtf8("\xC3\xA9t\xC3\xA9").size(), 3u);
}

TEST(Fnv1a64Test, MatchesPublishedVectors) {
  EXPECT_EQ(Fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(Fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(Fnv1a64("foobar"), 0x85944171f73967e8ULL);
}

TEST(SplitTest, KeepsEmptyPieces) {
  EXPECT_EQ(Split("a,,b", ',').size(), 3u);
  EXPECT_EQ(SplitN("k=v=w", '=', 2),
            (std::vector<std::string_view>{"k", "v=w"}));
  EXPECT_EQ(SplitWhitespace(" a \t b "),
            (std::vector<std::string_view>{"a", "b"}));
}

TEST(ParseIntTest, RejectsTrailingGarbage) {
  EXPECT_EQ(ParseInt<int>("42"), 42);
  EXPECT_FALSE(ParseInt<int>("42x").has_value());
  EXPECT_FALSE(ParseInt<int>("").has_value());
}

}  // namespace
}  // namespace coltype
