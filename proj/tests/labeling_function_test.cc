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

#include "coltype/labeling_function.h"

#include <gtest/gtest.h>

#include <random>

namespace coltype {
namespace {

Column Numeric(std::vector<std::string> values) {
  Column column{"", std::move(values)};
  column.primitive = InferPrimitive(column);
  return column;
}

TEST(InferTest, NumericRangeIsMeanPlusMinusAlphaStd) {
  const Column column = Numeric({"100", "200", "300"});
  const ColumnProfile profile = ProfileColumn(column);
  auto lfs = InferLabelingFunctions(column, profile, {"Income"}, "salary",
                                    "ev1");
  ASSERT_GE(lfs.size(), 3u);
  const auto& band = std::get<NumericRange>(lfs[0].body);
  EXPECT_NEAR(band.lo, 118.350, 1e-3);
  EXPECT_NEAR(band.hi, 281.650, 1e-3);
  const auto& span = std::get<NumericRange>(lfs[1].body);
  EXPECT_EQ(span, (NumericRange{100, 300}));
  EXPECT_EQ(lfs[0].lf_id, "ev1:0");
  EXPECT_EQ(lfs[0].provenance, "ev1");
}

TEST(InferTest, IncomeHeaderNextToName) {
  const Column column = Numeric({"52000", "61000", "70500"});
  TableContext context{"Income", "name", std::nullopt};
  auto lfs = InferLabelingFunctions(column, ProfileColumn(column), context,
                                    "salary", "ev2");
  ASSERT_EQ(lfs.size(), 4u);
  EXPECT_EQ(std::get<HeaderToken>(lfs[2].body),
            (HeaderToken{{"income"}}));
  EXPECT_EQ(std::get<CoOccurrence>(lfs[3].body),
            (CoOccurrence{"name", Direction::kLeft}));
  for (const auto& lf : lfs) EXPECT_EQ(lf.type_id, "salary");
}

TEST(InferTest, TextColumnYieldsValueSetAndBand) {
  Column column{"", {"red", "blue", "red", "green"}};
  column.primitive = InferPrimitive(column);
  auto lfs = InferLabelingFunctions(column, ProfileColumn(column), {""},
                                    "colour", "ev3");
  ASSERT_EQ(lfs.size(), 2u);
  EXPECT_EQ(std::get<ValueSet>(lfs[0].body).values,
            (std::set<std::string>{"blue", "green", "red"}));
  const auto& band = std::get<UniqueRatioBand>(lfs[1].body);
  EXPECT_DOUBLE_EQ(band.lo, 0.375);
  EXPECT_DOUBLE_EQ(band.hi, 1.0);
}

// Brute-force restatement of the ValueSet vote.
bool ValueSetOracle(const ValueSet& set, const std::vector<std::string>& v) {
  size_t present = 0, hits = 0;
  for (const auto& x : v) {
    if (x.empty()) continue;
    ++present;
    hits += set.values.count(x);
  }
  return present > 0 &&
         static_cast<double>(hits) >=
             set.min_overlap_fraction * static_cast<double>(present);
}

TEST(EvaluateTest, ValueSetAgreesWithBruteForce) {
  std::mt19937_64 rng(3);
  const std::vector<std::string> alphabet = {"a", "b", "c", "d", "e", ""};
  for (int trial = 0; trial < 500; ++trial) {
    ValueSet set;
    set.min_overlap_fraction = 0.1 * static_cast<double>(1 + rng() % 9);
    for (const char* s : {"a", "b", "c"}) {
      if (rng() % 2) set.values.insert(s);
    }
    Column column;
    for (size_t n = 1 + rng() % 12; n > 0; --n) {
      column.values.push_back(alphabet[rng() % alphabet.size()]);
    }
    column.primitive = InferPrimitive(column);
    LabelingFunction lf{"x", "t", set, ""};
    const bool vote = EvaluateLf(lf, column, ProfileColumn(column), {}) ==
                      LfVote::kMatch;
    EXPECT_EQ(vote, ValueSetOracle(set, column.values)) << trial;
  }
}

TEST(EvaluateTest, NumericRangeQuorum) {
  LabelingFunction lf{"x", "t", NumericRange{0, 10}, ""};
  const Column four_of_five = Numeric({"1", "2", "3", "4", "50"});
  EXPECT_EQ(EvaluateLf(lf, four_of_five, ProfileColumn(four_of_five), {}),
            LfVote::kMatch);
  const Column three_of_five = Numeric({"1", "2", "3", "40", "50"});
  EXPECT_EQ(EvaluateLf(lf, three_of_five, ProfileColumn(three_of_five), {}),
            LfVote::kAbstain);
}

TEST(EvaluateTest, HeaderTokenAndCoOccurrence) {
  const Column column = Numeric({"1"});
  const ColumnProfile profile = ProfileColumn(column);
  LabelingFunction header{"h", "t", HeaderToken{{"annual", "income"}}, ""};
  EXPECT_EQ(EvaluateLf(header, column, profile, {"Income"}), LfVote::kMatch);
  EXPECT_EQ(EvaluateLf(header, column, profile, {"gross income usd"}),
            LfVote::kAbstain);  // Jaccard 1/4.

  LabelingFunction left{"c", "t", CoOccurrence{"name", Direction::kLeft}, ""};
  EXPECT_EQ(EvaluateLf(left, column, profile, {"", "name", std::nullopt}),
            LfVote::kMatch);
  EXPECT_EQ(EvaluateLf(left, column, profile, {"", std::nullopt, "name"}),
            LfVote::kAbstain);
  LabelingFunction any{"c", "t", CoOccurrence{"name", Direction::kAny}, ""};
  EXPECT_EQ(EvaluateLf(any, column, profile, {"", std::nullopt, "name"}),
            LfVote::kMatch);
}

TEST(LfAcceptsValueTest, RangeAndSet) {
  LabelingFunction range{"r", "t", NumericRange{1, 2}, ""};
  EXPECT_TRUE(LfAcceptsValue(range, "1.5"));
  EXPECT_FALSE(LfAcceptsValue(range, "3"));
  EXPECT_FALSE(LfAcceptsValue(range, "abc"));
  LabelingFunction set{"s", "t", ValueSet{{"x"}, 0.5}, ""};
  EXPECT_TRUE(LfAcceptsValue(set, "x"));
  EXPECT_FALSE(LfAcceptsValue(set, "y"));
  LabelingFunction header{"h", "t", HeaderToken{{"x"}}, ""};
  EXPECT_TRUE(LfAcceptsValue(header, "anything"));
}

TEST(DirectionTest, NamesRoundTrip) {
  for (Direction d : {Direction::kLeft, Direction::kRight, Direction::kAny}) {
    EXPECT_EQ(ParseDirection(DirectionName(d)), d);
  }
  EXPECT_FALSE(ParseDirection("up").has_value());
}

}  // namespace
}  // namespace coltype
