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

#include <algorithm>
#include <charconv>
#include <cmath>

#include "absl/status/status.h"
#include "coltype/kernels.h"
#include "coltype/text.h"

namespace coltype {

namespace {

bool ParseDouble(std::string_view text, double* out) {
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), *out);
  return ec == std::errc() && ptr == text.data() + text.size() &&
         std::isfinite(*out);
}

bool ParseSize(std::string_view text, size_t* out) {
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), *out);
  return ec == std::errc() && ptr == text.data() + text.size();
}

template <typename Fn>
void ForEachCandidate(const Ontology& ontology, const TypeFilter& types,
                      Fn&& fn) {
  if (types.empty()) {
    for (const auto& [id, type] : ontology.types()) {
      if (id != kUnknownTypeId) fn(type);
    }
    return;
  }
  for (const std::string& id : types) {
    const SemanticType* type = ontology.Find(id);
    if (type != nullptr && id != kUnknownTypeId) fn(*type);
  }
}

}  // namespace

const std::vector<double>* EmbeddingStore::Find(std::string_view token) const {
  auto it = vectors_.find(std::string(token));
  return it == vectors_.end() ? nullptr : &it->second;
}

std::optional<std::vector<double>> EmbeddingStore::EmbedText(
    std::string_view text) const {
  std::vector<double> sum(dimension_, 0.0);
  size_t known = 0;
  for (const std::string& token : Tokenize(text)) {
    if (const std::vector<double>* v = Find(token)) {
      kernels::Axpy(1.0, *v, sum);
      ++known;
    }
  }
  if (known == 0) return std::nullopt;
  kernels::Scale(1.0 / static_cast<double>(known), sum);
  return sum;
}

absl::Status EmbeddingStore::Add(std::string token,
                                 std::vector<double> vector) {
  if (vector.size() != dimension_) {
    return absl::InvalidArgumentError(
        StrCat("token '", token, "' has dimension ", vector.size(),
                     ", expected ", dimension_));
  }
  vectors_[std::move(token)] = std::move(vector);
  return absl::OkStatus();
}

absl::StatusOr<EmbeddingStore> LoadEmbeddings(std::string_view content) {
  std::optional<size_t> dimension;
  std::optional<size_t> declared_vocab;
  std::vector<std::pair<std::string, std::vector<double>>> rows;
  bool first = true;
  int line_number = 0;
  for (std::string_view line : Split(content, '\n')) {
    ++line_number;
    line = TrimWhitespace(line);
    if (line.empty()) continue;
    std::vector<std::string_view> parts = SplitWhitespace(line);
    if (first) {
      first = false;
      size_t vocab = 0;
      size_t dim = 0;
      if (parts.size() == 2 && ParseSize(parts[0], &vocab) &&
          ParseSize(parts[1], &dim)) {
        if (dim == 0) return absl::InvalidArgumentError("dimension is zero");
        dimension = dim;
        declared_vocab = vocab;
        continue;
      }
    }
    if (parts.size() < 2) {
      return absl::InvalidArgumentError(
          StrCat("line ", line_number, ": token without vector"));
    }
    const std::string token(parts[0]);
    std::vector<double> vector;
    vector.reserve(parts.size() - 1);
    for (size_t i = 1; i < parts.size(); ++i) {
      double v = 0.0;
      if (!ParseDouble(parts[i], &v)) {
        return absl::InvalidArgumentError(StrCat(
            "line ", line_number, ": bad component for token '", token, "'"));
      }
      vector.push_back(v);
    }
    if (!dimension.has_value()) dimension = vector.size();
    if (vector.size() != *dimension) {
      return absl::InvalidArgumentError(
          StrCat("token '", token, "' has dimension ", vector.size(),
                       ", expected ", *dimension));
    }
    rows.emplace_back(token, std::move(vector));
  }
  if (rows.empty()) return absl::InvalidArgumentError("empty embedding file");
  if (declared_vocab.has_value() && *declared_vocab != rows.size()) {
    return absl::InvalidArgumentError(
        StrCat("header declares ", *declared_vocab, " tokens, found ",
                     rows.size()));
  }
  EmbeddingStore store(*dimension);
  for (auto& [token, vector] : rows) {
    absl::Status status = store.Add(std::move(token), std::move(vector));
    if (!status.ok()) return status;
  }
  return store;
}

double Cosine(std::span<const double> a, std::span<const double> b) {
  const double na = kernels::SquaredNorm(a);
  const double nb = kernels::SquaredNorm(b);
  if (na == 0.0 || nb == 0.0) return 0.0;
  const double c = kernels::Dot(a, b) / std::sqrt(na * nb);
  return std::clamp(c, -1.0, 1.0);
}

size_t EditDistance(std::u32string_view a, std::u32string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<size_t> row(b.size() + 1);
  for (size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (size_t i = 1; i <= a.size(); ++i) {
    size_t diagonal = row[0];
    row[0] = i;
    for (size_t j = 1; j <= b.size(); ++j) {
      const size_t above = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1,
                         diagonal + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diagonal = above;
    }
  }
  return row[b.size()];
}

double NameSimilarity(std::string_view a, std::string_view b) {
  const std::u32string ua = DecodeUtf8(NormalizeName(a));
  const std::u32string ub = DecodeUtf8(NormalizeName(b));
  const size_t longest = std::max(ua.size(), ub.size());
  if (longest == 0) return 1.0;
  return 1.0 - static_cast<double>(EditDistance(ua, ub)) /
                   static_cast<double>(longest);
}

StagePrediction SyntacticMatch(std::string_view header,
                               const Ontology& ontology, double fuzzy_floor,
                               const TypeFilter& types) {
  StagePrediction prediction{Stage::kHeader, {}};
  const std::string normalized = NormalizeName(header);
  if (normalized.empty()) return prediction;

  ForEachCandidate(ontology, types, [&](const SemanticType& type) {
    bool exact = NormalizeName(type.canonical_name) == normalized;
    for (const std::string& synonym : type.synonyms) {
      exact = exact || NormalizeName(synonym) == normalized;
    }
    if (exact) prediction.scores[type.id] = 1.0;
  });
  if (!prediction.empty()) return prediction;

  ForEachCandidate(ontology, types, [&](const SemanticType& type) {
    double best = NameSimilarity(normalized, type.canonical_name);
    for (const std::string& synonym : type.synonyms) {
      best = std::max(best, NameSimilarity(normalized, synonym));
    }
    if (best >= fuzzy_floor && best > 0.0) prediction.scores[type.id] = best;
  });
  return prediction;
}

StagePrediction SemanticMatch(std::string_view header,
                              const Ontology& ontology,
                              const EmbeddingStore& store,
                              const TypeFilter& types) {
  StagePrediction prediction{Stage::kHeader, {}};
  const std::optional<std::vector<double>> header_vector =
      store.EmbedText(header);
  if (!header_vector.has_value()) return prediction;
  ForEachCandidate(ontology, types, [&](const SemanticType& type) {
    const std::optional<std::vector<double>> type_vector =
        store.EmbedText(type.canonical_name);
    if (!type_vector.has_value()) return;
    const double score = std::max(0.0, Cosine(*header_vector, *type_vector));
    if (score > 0.0) prediction.scores[type.id] = score;
  });
  return prediction;
}

StagePrediction MatchHeader(std::string_view header, const Ontology& ontology,
                            const EmbeddingStore& store, double fuzzy_floor,
                            const TypeFilter& types) {
  StagePrediction syntactic =
      SyntacticMatch(header, ontology, fuzzy_floor, types);
  for (const auto& [id, score] : syntactic.scores) {
    if (score == 1.0) return syntactic;
  }
  StagePrediction semantic = SemanticMatch(header, ontology, store, types);
  for (const auto& [id, score] : semantic.scores) {
    double& slot = syntactic.scores[id];
    slot = std::max(slot, score);
  }
  return syntactic;
}

}  // namespace coltype
