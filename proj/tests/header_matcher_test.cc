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

#include "coltype/header_matcher.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

namespace coltype {
namespace {

// Textbook O(nm) table over bytes; test names are ASCII.
size_t ReferenceLevenshtein(const std::string& a, const std::string& b) {
  std::vector<std::vector<size_t>> d(a.size() + 1,
                                     std::vector<size_t>(b.size() + 1));
  for (size_t i = 0; i <= a.size(); ++i) d[i][0] = i;
  for (size_t j = 0; j <= b.size(); ++j) d[0][j] = j;
  for (size_t i = 1; i <= a.size(); ++i) {
    for (size_t j = 1; j <= b.size(); ++j) {
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1,
                          d[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    }
  }
  return d[a.size()][b.size()];
}

std::u32string Wide(const std::string& s) {
  return std::u32string(s.begin(), s.end());
}

TEST(EditDistanceTest, MatchesReferenceOnRandomStrings) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    std::string a, b;
    for (size_t n = rng() % 9; n > 0; --n) a.push_back('a' + rng() % 4);
    for (size_t n = rng() % 9; n > 0; --n) b.push_back('a' + rng() % 4);
    EXPECT_EQ(EditDistance(Wide(a), Wide(b)), ReferenceLevenshtein(a, b))
        << a << " / " << b;
  }
}

TEST(NameSimilarityTest, SalariesAgainstSalary) {
  EXPECT_EQ(ReferenceLevenshtein("salaries", "salary"), 3u);
  EXPECT_DOUBLE_EQ(NameSimilarity("salaries", "salary"), 1.0 - 3.0 / 8.0);
  EXPECT_DOUBLE_EQ(NameSimilarity("Zip_Code", "zip code"), 1.0);
  EXPECT_DOUBLE_EQ(NameSimilarity("", ""), 1.0);
}

Ontology TestOntology() {
  auto ontology = LoadOntology(
      "version\t1\n"
      "salary\tsalary\t-\twage,pay\n"
      "city\tcity\t-\ttown\n"
      "country\tcountry\t-\tnation\n");
  EXPECT_TRUE(ontology.ok());
  return *ontology;
}

TEST(SyntacticMatchTest, ExactAndFuzzy) {
  const Ontology ontology = TestOntology();
  auto exact = SyntacticMatch("Wage", ontology);
  EXPECT_EQ(exact.scores.size(), 1u);
  EXPECT_DOUBLE_EQ(exact.Score("salary"), 1.0);

  // "salaries" is 0.625 away from salary and far from everything else.
  auto fuzzy = SyntacticMatch("salaries", ontology, 0.6);
  EXPECT_DOUBLE_EQ(fuzzy.Score("salary"), 0.625);
  EXPECT_EQ(fuzzy.Score("city"), 0.0);
  EXPECT_TRUE(SyntacticMatch("salaries", ontology, 0.7).empty());

  auto filtered = SyntacticMatch("wage", ontology, 0.6, {"city"});
  EXPECT_TRUE(filtered.empty());
}

TEST(SemanticMatchTest, CosineOfMeanVectors) {
  const Ontology ontology = TestOntology();
  EmbeddingStore store(2);
  ASSERT_TRUE(store.Add("salary", {1.0, 0.0}).ok());
  ASSERT_TRUE(store.Add("city", {0.0, 1.0}).ok());
  ASSERT_TRUE(store.Add("country", {-1.0, 0.0}).ok());
  ASSERT_TRUE(store.Add("annual", {1.0, 2.0}).ok());
  ASSERT_TRUE(store.Add("income", {1.0, 0.0}).ok());
  // mean("annual income") = (1, 1): cos 1/sqrt(2) to both salary and city,
  // and negative to country, which is clamped and dropped.
  auto scores = SemanticMatch("annual_income", ontology, store);
  EXPECT_NEAR(scores.Score("salary"), 1.0 / std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(scores.Score("city"), 1.0 / std::sqrt(2.0), 1e-12);
  EXPECT_FALSE(scores.scores.contains("country"));
  EXPECT_TRUE(SemanticMatch("zzz", ontology, store).empty());
}

TEST(MatchHeaderTest, ExactShortCircuitsSemantic) {
  const Ontology ontology = TestOntology();
  EmbeddingStore store(2);
  ASSERT_TRUE(store.Add("town", {0.0, 1.0}).ok());
  ASSERT_TRUE(store.Add("city", {0.0, 1.0}).ok());
  ASSERT_TRUE(store.Add("salary", {0.1, 1.0}).ok());
  auto match = MatchHeader("Town", ontology, store);
  EXPECT_EQ(match.scores.size(), 1u);
  EXPECT_DOUBLE_EQ(match.Score("city"), 1.0);
}

TEST(CosineTest, ZeroVectorGivesZero) {
  const std::vector<double> zero = {0, 0}, x = {1, 2};
  EXPECT_EQ(Cosine(zero, x), 0.0);
  EXPECT_NEAR(Cosine(x, x), 1.0, 1e-15);
}

TEST(LoadEmbeddingsTest, ParsesOptionalHeader) {
  auto store = LoadEmbeddings("2 3\na 1 0 0\nb 0 1 0\n");
  ASSERT_TRUE(store.ok()) << store.status();
  EXPECT_EQ(store->dimension(), 3u);
  EXPECT_EQ(store->size(), 2u);
  EXPECT_FALSE(LoadEmbeddings("a 1 0\nb 1\n").ok());
}

}  // namespace
}  // namespace coltype
