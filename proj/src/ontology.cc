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

#include "coltype/ontology.h"

#include <set>

#include "absl/status/status.h"
#include <fmt/ranges.h>

#include "coltype/text.h"

namespace coltype {

namespace {

SemanticType UnknownType() {
  SemanticType type;
  type.id = std::string(kUnknownTypeId);
  type.canonical_name = std::string(kUnknownTypeId);
  type.source = TypeSource::kBuiltin;
  return type;
}

std::string IdFromName(std::string_view normalized) {
  std::string id(normalized);
  for (char& c : id) {
    if (c == ' ') c = '_';
  }
  return id;
}

}  // namespace

std::string_view TypeSourceName(TypeSource source) {
  return source == TypeSource::kUser ? "user" : "builtin";
}

Ontology::Ontology() {
  types_.emplace(std::string(kUnknownTypeId), UnknownType());
}

void Ontology::IndexType(const SemanticType& type) {
  if (type.id == kUnknownTypeId) return;
  const std::string canonical = NormalizeName(type.canonical_name);
  auto it = canonical_index_.find(canonical);
  if (it == canonical_index_.end() || type.id < it->second) {
    canonical_index_[canonical] = type.id;
  }
  for (const std::string& synonym : type.synonyms) {
    const std::string key = NormalizeName(synonym);
    if (key.empty()) continue;
    auto sit = synonym_index_.find(key);
    if (sit == synonym_index_.end() || type.id < sit->second) {
      synonym_index_[key] = type.id;
    }
  }
}

const SemanticType* Ontology::Find(std::string_view id) const {
  auto it = types_.find(id);
  return it == types_.end() ? nullptr : &it->second;
}

const SemanticType* Ontology::ResolveName(std::string_view name) const {
  const std::string key = NormalizeName(name);
  if (key.empty()) return nullptr;
  if (auto it = canonical_index_.find(key); it != canonical_index_.end()) {
    return Find(it->second);
  }
  if (auto it = synonym_index_.find(key); it != synonym_index_.end()) {
    return Find(it->second);
  }
  return nullptr;
}

absl::StatusOr<SemanticType> Ontology::AddUserType(std::string_view name) {
  const std::string normalized = NormalizeName(name);
  if (normalized.empty()) {
    return absl::InvalidArgumentError(
        StrCat("type name '", name, "' normalizes to empty"));
  }
  if (normalized == kUnknownTypeId) {
    return absl::InvalidArgumentError("'unknown' is a reserved type");
  }
  if (const SemanticType* existing = ResolveName(normalized)) {
    return *existing;
  }
  std::string id = IdFromName(normalized);
  for (int suffix = 2; types_.contains(id); ++suffix) {
    id = StrCat(IdFromName(normalized), "_", suffix);
  }
  SemanticType type;
  type.id = id;
  type.canonical_name = normalized;
  type.source = TypeSource::kUser;
  IndexType(type);
  types_.emplace(id, type);
  ++version_;
  return type;
}

std::vector<std::string> Ontology::TypeIds() const {
  std::vector<std::string> ids;
  ids.reserve(types_.size());
  for (const auto& [id, type] : types_) ids.push_back(id);
  return ids;
}

std::string Ontology::ToFileContent() const {
  std::string out = StrCat("version\t", version_, "\n");
  for (const auto& [id, type] : types_) {
    out += StrCat(id, "\t", type.canonical_name, "\t",
                  type.parent_id.value_or("-"), "\t",
                  type.synonyms.empty()
                      ? std::string("-")
                      : fmt::format("{}", fmt::join(type.synonyms, ",")),
                  "\n");
  }
  return out;
}

absl::StatusOr<Ontology> LoadOntology(std::string_view content) {
  Ontology ontology;
  ontology.types_.clear();
  bool seen_version = false;
  int64_t version = 1;
  int line_number = 0;
  for (std::string_view raw_line : Split(content, '\n')) {
    ++line_number;
    std::string_view line = raw_line;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (TrimWhitespace(line).empty() || line.front() == '#') continue;
    std::vector<std::string_view> fields = Split(line, '\t');
    if (!seen_version) {
      if (fields.size() != 2 || fields[0] != "version" ||
          !ParseInt<int64_t>(TrimWhitespace(fields[1])).has_value()) {
        return absl::InvalidArgumentError(StrCat(
            "line ", line_number, ": expected 'version<TAB><int>' header"));
      }
      version = *ParseInt<int64_t>(TrimWhitespace(fields[1]));
      seen_version = true;
      continue;
    }
    if (fields.size() != 4) {
      return absl::InvalidArgumentError(
          StrCat("line ", line_number, ": expected 4 tab-separated "
                       "fields, got ", fields.size()));
    }
    SemanticType type;
    type.id = std::string(TrimWhitespace(fields[0]));
    type.canonical_name = std::string(TrimWhitespace(fields[1]));
    if (type.id.empty()) {
      return absl::InvalidArgumentError(
          StrCat("line ", line_number, ": empty type id"));
    }
    if (NormalizeName(type.canonical_name).empty()) {
      return absl::InvalidArgumentError(
          StrCat("line ", line_number, ": canonical name of '", type.id,
                       "' normalizes to empty"));
    }
    const std::string_view parent = TrimWhitespace(fields[2]);
    if (parent != "-" && !parent.empty()) type.parent_id = std::string(parent);
    const std::string_view synonyms = TrimWhitespace(fields[3]);
    if (synonyms != "-" && !synonyms.empty()) {
      for (std::string_view synonym : Split(synonyms, ',')) {
        synonym = TrimWhitespace(synonym);
        if (!synonym.empty()) type.synonyms.emplace_back(synonym);
      }
    }
    if (type.id == kUnknownTypeId &&
        (!type.synonyms.empty() || type.parent_id.has_value())) {
      return absl::InvalidArgumentError(
          StrCat("line ", line_number,
                       ": reserved type 'unknown' must have no synonyms and "
                       "no parent"));
    }
    if (ontology.types_.contains(type.id)) {
      return absl::InvalidArgumentError(StrCat(
          "line ", line_number, ": duplicate type id '", type.id, "'"));
    }
    ontology.types_.emplace(type.id, std::move(type));
  }
  if (!seen_version) {
    return absl::InvalidArgumentError(
        StrCat("line ", line_number, ": missing version header"));
  }
  if (!ontology.types_.contains(kUnknownTypeId)) {
    ontology.types_.emplace(std::string(kUnknownTypeId), UnknownType());
  }

  for (const auto& [id, type] : ontology.types_) {
    if (!type.parent_id.has_value()) continue;
    if (!ontology.types_.contains(*type.parent_id)) {
      return absl::InvalidArgumentError(StrCat(
          "type '", id, "' has dangling parent '", *type.parent_id, "'"));
    }
    std::set<std::string> visited = {id};
    const SemanticType* cursor = &type;
    while (cursor->parent_id.has_value()) {
      if (!visited.insert(*cursor->parent_id).second) {
        return absl::InvalidArgumentError(
            StrCat("type '", id, "' is part of a parent cycle"));
      }
      cursor = &ontology.types_.at(*cursor->parent_id);
    }
  }
  for (const auto& [id, type] : ontology.types_) ontology.IndexType(type);
  ontology.version_ = version;
  return ontology;
}

}  // namespace coltype
