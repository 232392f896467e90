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

#ifndef COLTYPE_ONTOLOGY_H_
#define COLTYPE_ONTOLOGY_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"

namespace coltype {

inline constexpr std::string_view kUnknownTypeId = "unknown";

enum class TypeSource { kBuiltin, kUser };

std::string_view TypeSourceName(TypeSource source);

struct SemanticType {
  std::string id;
  std::string canonical_name;
  std::vector<std::string> synonyms;
  std::optional<std::string> parent_id;  // Metadata only; never scored.
  TypeSource source = TypeSource::kBuiltin;

  bool operator==(const SemanticType&) const = default;
};

// The label space. Always holds the reserved `unknown` type, which has no
// synonyms, no parent, and cannot be reached through ResolveName().
//
// Values are treated as immutable snapshots by the store: a mutation is made
// on a copy, and every mutation bumps version() by exactly one.
class Ontology {
 public:
  // An ontology holding only `unknown`, version 1.
  Ontology();

  const SemanticType* Find(std::string_view id) const;
  bool Contains(std::string_view id) const { return Find(id) != nullptr; }

  // Looks a name up by canonical name first, then synonyms, after
  // NormalizeName(). Returns nullptr when absent.
  const SemanticType* ResolveName(std::string_view name) const;

  // Returns the type `name` resolves to, or registers a new user type. Fails
  // when `name` normalizes to empty or to the reserved `unknown`.
  absl::StatusOr<SemanticType> AddUserType(std::string_view name);

  const std::map<std::string, SemanticType, std::less<>>& types() const {
    return types_;
  }
  // Sorted type ids, `unknown` included.
  std::vector<std::string> TypeIds() const;
  int64_t version() const { return version_; }
  size_t size() const { return types_.size(); }

  // Renders the ontology in the TSV file format accepted by LoadOntology().
  std::string ToFileContent() const;

 private:
  friend absl::StatusOr<Ontology> LoadOntology(std::string_view content);

  void IndexType(const SemanticType& type);

  std::map<std::string, SemanticType, std::less<>> types_;
  // Normalized canonical names and synonyms to type id. Canonical names win
  // over synonyms; among equals the smaller id wins.
  std::map<std::string, std::string, std::less<>> canonical_index_;
  std::map<std::string, std::string, std::less<>> synonym_index_;
  int64_t version_ = 1;
};

// Parses the ontology file:
//
//   # comment
//   version<TAB><int>
//   id<TAB>canonical_name<TAB>parent_id or -<TAB>comma-separated synonyms or -
//
// Errors carry the 1-based line number. `unknown` is injected when absent.
absl::StatusOr<Ontology> LoadOntology(std::string_view content);

}  // namespace coltype

#endif  // COLTYPE_ONTOLOGY_H_
