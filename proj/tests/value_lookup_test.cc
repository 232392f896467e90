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

#include "coltype/value_lookup.h"

#include <gmock/gmock.h>
#include <gtest/gtest.h>

#include <random>

namespace coltype {
namespace {

using ::testing::HasSubstr;

TEST(SampleValuesTest, GoldenIndicesFromIndependentLcg) {
  // Computed outside the library: partial Fisher-Yates over 1000 positions
  // with the MMIX LCG (state = 42), high 31 bits, j = i + next % (n - i).
  Column column;
  for (int i = 0; i < 1000; ++i) column.values.push_back(std::to_string(i));
  const ValueSample sample = SampleValues(column, 10, 42);
  EXPECT_EQ(sample.values,
            (std::vector<std::string>{"35", "53", "186", "206", "220", "334",
                                      "422", "631", "690", "785"}));
  EXPECT_EQ(sample.source_size, 1000u);
  EXPECT_EQ(sample.seed, 42u);
}

TEST(SampleValuesTest, SmallColumnsAreTakenWhole) {
  Column column{"", {"a", "", "b", "c"}};
  const ValueSample sample = SampleValues(column, 3, 1);
  EXPECT_EQ(sample.values, (std::vector<std::string>{"a", "b", "c"}));
}

TEST(SampleValuesTest, SampleIsASubsetInColumnOrder) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    Column column;
    for (size_t n = rng() % 300; n > 0; --n) {
      column.values.push_back(rng() % 5 == 0 ? "" : std::to_string(rng()));
    }
    const size_t cap = 1 + rng() % 40;
    const ValueSample sample = SampleValues(column, cap, rng());
    EXPECT_EQ(sample.values.size(), std::min(cap, sample.source_size));
    size_t cursor = 0;
    for (const std::string& v : sample.values) {
      while (cursor < column.values.size() && column.values[cursor] != v) {
        ++cursor;
      }
      ASSERT_LT(cursor, column.values.size());
      ++cursor;
    }
  }
}

TEST(MakeRuleTest, InvalidRegexNamesPosition) {
  auto rule = MakeRegexRule("r", "t", "ab(c", RuleOrigin::kUser);
  ASSERT_FALSE(rule.ok());
  EXPECT_EQ(rule.status().code(), absl::StatusCode::kInvalidArgument);
  EXPECT_THAT(std::string(rule.status().message()), HasSubstr("position"));
}

TEST(MakeRuleTest, RegexIsFullMatch) {
  auto rule = MakeRegexRule("r", "t", "[0-9]{5}", RuleOrigin::kUser);
  ASSERT_TRUE(rule.ok());
  EXPECT_TRUE(rule->MatchesValue("02139"));
  EXPECT_FALSE(rule->MatchesValue("021390"));
}

TEST(MakeRuleTest, DictionaryCaseFolding) {
  auto folded = MakeDictionaryRule("d", "t", {"Oslo", " Paris "}, true,
                                   RuleOrigin::kKb);
  ASSERT_TRUE(folded.ok());
  EXPECT_TRUE(folded->MatchesValue("OSLO"));
  EXPECT_TRUE(folded->MatchesValue("paris"));
  auto exact = MakeDictionaryRule("d", "t", {"Oslo"}, false, RuleOrigin::kKb);
  ASSERT_TRUE(exact.ok());
  EXPECT_FALSE(exact->MatchesValue("oslo"));
  EXPECT_FALSE(
      MakeDictionaryRule("d", "t", {" ", ""}, true, RuleOrigin::kKb).ok());
}

TEST(RegistryTest, RejectsDuplicatesAndUnknownTypes) {
  auto ontology = LoadOntology("version\t1\ncity\tcity\t-\t-\n");
  ASSERT_TRUE(ontology.ok());
  RuleRegistry registry;
  auto rule = MakeDictionaryRule("d", "city", {"x"}, true, RuleOrigin::kKb);
  ASSERT_TRUE(registry.Register(*rule, *ontology).ok());
  EXPECT_EQ(registry.Register(*rule, *ontology).status().code(),
            absl::StatusCode::kAlreadyExists);
  auto other = MakeDictionaryRule("e", "zip", {"x"}, true, RuleOrigin::kKb);
  EXPECT_EQ(registry.Register(*other, *ontology).status().code(),
            absl::StatusCode::kInvalidArgument);
  EXPECT_TRUE(registry.Remove("d").ok());
  EXPECT_TRUE(registry.empty());
}

// Each type's score must be k/n, k counting sampled values matched by any
// rule of that type. The oracle tests membership directly on the sets.
TEST(ApplyLookupTest, ScoresAreMatchedFractions) {
  std::mt19937_64 rng(21);
  const std::vector<std::string> alphabet = {"a", "b", "c", "d", "e",
                                             "f", "g", "h"};
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::pair<std::string, std::set<std::string>>> sets;
    std::vector<LookupRule> rules;
    for (int r = 0; r < 4; ++r) {
      std::set<std::string> values;
      for (const auto& a : alphabet) {
        if (rng() % 3 == 0) values.insert(a);
      }
      if (values.empty()) values.insert("a");
      const std::string type = r % 2 == 0 ? "t0" : "t1";
      sets.emplace_back(type, values);
      rules.push_back(*MakeDictionaryRule(
          "r" + std::to_string(r), type,
          std::vector<std::string>(values.begin(), values.end()), true,
          RuleOrigin::kKb));
    }
    ValueSample sample;
    for (size_t n = 1 + rng() % 20; n > 0; --n) {
      sample.values.push_back(alphabet[rng() % alphabet.size()]);
    }
    auto prediction = ApplyLookup(sample, rules, {});
    ASSERT_TRUE(prediction.ok());
    for (const std::string type : {"t0", "t1"}) {
      size_t k = 0;
      for (const auto& v : sample.values) {
        bool hit = false;
        for (const auto& [t, values] : sets) {
          hit = hit || (t == type && values.contains(v));
        }
        k += hit;
      }
      const double expected =
          static_cast<double>(k) / static_cast<double>(sample.values.size());
      EXPECT_DOUBLE_EQ(prediction->Score(type), expected);
      EXPECT_EQ(prediction->scores.contains(type), k > 0);
    }
  }
}

TEST(ApplyLookupTest, LfRulesNeedAColumnVote) {
  LfRegistry lfs;
  lfs["lf1"] = LabelingFunction{"lf1", "salary", NumericRange{10, 20}, "e"};
  const std::vector<LookupRule> rules = {
      MakeLfRule(lfs["lf1"], RuleOrigin::kDpbdLocal)};
  Column column{"", {"11", "12", "13", "14", "99"}};
  column.primitive = InferPrimitive(column);
  const ColumnProfile profile = ProfileColumn(column);
  const ValueSample sample = SampleValues(column, 100, 0);

  auto without = ApplyLookup(sample, rules, lfs);
  ASSERT_TRUE(without.ok());
  EXPECT_TRUE(without->empty());

  LookupContext context{&column, &profile, {}};
  auto with = ApplyLookup(sample, rules, lfs, &context);
  ASSERT_TRUE(with.ok());
  EXPECT_DOUBLE_EQ(with->Score("salary"), 4.0 / 5.0);

  LfRegistry missing;
  EXPECT_EQ(ApplyLookup(sample, rules, missing).status().code(),
            absl::StatusCode::kFailedPrecondition);
}

TEST(BuiltinPackTest, ParsesAndMatchesEmails) {
  auto rules = ParseRegexPack(BuiltinRegexPack(), RuleOrigin::kBuiltin);
  ASSERT_TRUE(rules.ok()) << rules.status();
  bool saw_email = false;
  for (const auto& rule : *rules) {
    if (rule.type_id == "email") {
      saw_email = true;
      EXPECT_TRUE(rule.MatchesValue("ann@example.org"));
      EXPECT_FALSE(rule.MatchesValue("not an email"));
    }
  }
  EXPECT_TRUE(saw_email);
}

TEST(ParsePackTest, ErrorsNameTheLine) {
  auto rules = ParseRegexPack("# c\nr1\tt\t[0-9]+\nr2\tt\n", RuleOrigin::kKb);
  ASSERT_FALSE(rules.ok());
  EXPECT_THAT(std::string(rules.status().message()), HasSubstr("line 3"));
  EXPECT_EQ(ParseDictionary("# x\nOslo\n\n Bergen \n"),
            (std::vector<std::string>{"Oslo", "Bergen"}));
}

}  // namespace
}  // namespace coltype
