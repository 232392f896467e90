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

#ifndef COLTYPE_HEADER_MATCHER_H_
#define COLTYPE_HEADER_MATCHER_H_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "absl/status/statusor.h"
#include "coltype/ontology.h"
#include "coltype/prediction.h"

namespace coltype {

// Word vectors keyed by token. Absent tokens stay absent.
class EmbeddingStore {
 public:
  EmbeddingStore() = default;
  explicit EmbeddingStore(size_t dimension) : dimension_(dimension) {}

  size_t dimension() const { return dimension_; }
  size_t size() const { return vectors_.size(); }
  const std::vector<double>* Find(std::string_view token) const;

  // Mean vector of the known tokens of `text` (tokenized like header names),
  // or nullopt when none is known.
  std::optional<std::vector<double>> EmbedText(std::string_view text) const;

  absl::Status Add(std::string token, std::vector<double> vector);

 private:
  size_t dimension_ = 0;
  std::unordered_map<std::string, std::vector<double>> vectors_;
};

// Text format: optional first line "<vocab> <dim>", then "token v1 ... vd".
absl::StatusOr<EmbeddingStore> LoadEmbeddings(std::string_view content);

// Cosine similarity; 0 when either vector is zero.
double Cosine(std::span<const double> a, std::span<const double> b);

// Plain Levenshtein distance over code points.
size_t EditDistance(std::u32string_view a, std::u32string_view b);

// 1 - dist / max(|a|, |b|) over normalized names; 1 for two empty strings.
double NameSimilarity(std::string_view a, std::string_view b);

// Type ids a matcher may emit. Empty means every type except `unknown`.
using TypeFilter = std::vector<std::string>;

inline constexpr double kDefaultFuzzyFloor = 0.6;

// Exact normalized match on canonical name or synonym gives 1.0 for every
// matching type. Otherwise types whose best name similarity reaches
// fuzzy_floor are scored by that similarity.
StagePrediction SyntacticMatch(std::string_view header,
                               const Ontology& ontology,
                               double fuzzy_floor = kDefaultFuzzyFloor,
                               const TypeFilter& types = {});

// max(0, cosine) between the mean header vector and the mean vector of each
// canonical type name. Zero scores are dropped.
StagePrediction SemanticMatch(std::string_view header,
                              const Ontology& ontology,
                              const EmbeddingStore& store,
                              const TypeFilter& types = {});

// Header stage: an exact syntactic match short-circuits; otherwise the
// per-type max of syntactic and semantic scores.
StagePrediction MatchHeader(std::string_view header, const Ontology& ontology,
                            const EmbeddingStore& store,
                            double fuzzy_floor = kDefaultFuzzyFloor,
                            const TypeFilter& types = {});

}  // namespace coltype

#endif  // COLTYPE_HEADER_MATCHER_H_
