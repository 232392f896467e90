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

#include <algorithm>

#include "coltype/text.h"

namespace coltype {

std::string_view DirectionName(Direction direction) {
  switch (direction) {
    case Direction::kLeft:
      return "left";
    case Direction::kRight:
      return "right";
    case Direction::kAny:
      return "any";
  }
  return "any";
}

std::optional<Direction> ParseDirection(std::string_view name) {
  if (name == "left") return Direction::kLeft;
  if (name == "right") return Direction::kRight;
  if (name == "any") return Direction::kAny;
  return std::nullopt;
}

std::string_view LfKindName(const LfBody& body) {
  struct Visitor {
    std::string_view operator()(const NumericRange&) { return "numeric_range"; }
    std::string_view operator()(const ValueSet&) { return "value_set"; }
    std::string_view operator()(const UniqueRatioBand&) {
      return "unique_ratio_band";
    }
    std::string_view operator()(const HeaderToken&) { return "header_token"; }
    std::string_view operator()(const CoOccurrence&) { return "co_occurrence"; }
  };
  return std::visit(Visitor{}, body);
}

namespace {

LfVote Vote(bool match) { return match ? LfVote::kMatch : LfVote::kAbstain; }

LfVote EvaluateRange(const NumericRange& range, const Column& column,
                     const ColumnProfile& profile) {
  if (column.primitive != Primitive::kNumeric || profile.n_present() == 0) {
    return LfVote::kAbstain;
  }
  size_t inside = 0;
  for (const std::string& value : column.values) {
    if (value.empty()) continue;
    std::optional<double> v = ParseDecimal(value);
    if (v.has_value() && *v >= range.lo && *v <= range.hi) ++inside;
  }
  return Vote(static_cast<double>(inside) >=
              kNumericRangeQuorum * static_cast<double>(profile.n_present()));
}

LfVote EvaluateValueSet(const ValueSet& set, const Column& column,
                        const ColumnProfile& profile) {
  if (profile.n_present() == 0) return LfVote::kAbstain;
  size_t hits = 0;
  for (const std::string& value : column.values) {
    if (!value.empty() && set.values.contains(value)) ++hits;
  }
  return Vote(static_cast<double>(hits) >=
              set.min_overlap_fraction *
                  static_cast<double>(profile.n_present()));
}

LfVote EvaluateHeader(const HeaderToken& lf, const TableContext& context) {
  if (lf.tokens.empty()) return LfVote::kAbstain;
  const std::vector<std::string> tokens = Tokenize(context.header);
  const std::set<std::string> header_tokens(tokens.begin(), tokens.end());
  if (header_tokens.empty()) return LfVote::kAbstain;
  size_t shared = 0;
  for (const std::string& token : header_tokens) {
    if (lf.tokens.contains(token)) ++shared;
  }
  const size_t united = header_tokens.size() + lf.tokens.size() - shared;
  return Vote(static_cast<double>(shared) >=
              kHeaderTokenJaccard * static_cast<double>(united));
}

LfVote EvaluateCoOccurrence(const CoOccurrence& lf,
                            const TableContext& context) {
  const bool left = context.left_type == lf.neighbor_type_id;
  const bool right = context.right_type == lf.neighbor_type_id;
  switch (lf.direction) {
    case Direction::kLeft:
      return Vote(left);
    case Direction::kRight:
      return Vote(right);
    case Direction::kAny:
      return Vote(left || right);
  }
  return LfVote::kAbstain;
}

}  // namespace

LfVote EvaluateLf(const LabelingFunction& lf, const Column& column,
                  const ColumnProfile& profile, const TableContext& context) {
  if (const auto* range = std::get_if<NumericRange>(&lf.body)) {
    return EvaluateRange(*range, column, profile);
  }
  if (const auto* set = std::get_if<ValueSet>(&lf.body)) {
    return EvaluateValueSet(*set, column, profile);
  }
  if (const auto* band = std::get_if<UniqueRatioBand>(&lf.body)) {
    if (profile.n_present() == 0) return LfVote::kAbstain;
    const double r = profile.unique_ratio();
    return Vote(r >= band->lo && r <= band->hi);
  }
  if (const auto* header = std::get_if<HeaderToken>(&lf.body)) {
    return EvaluateHeader(*header, context);
  }
  return EvaluateCoOccurrence(std::get<CoOccurrence>(lf.body), context);
}

bool LfAcceptsValue(const LabelingFunction& lf, std::string_view value) {
  if (const auto* range = std::get_if<NumericRange>(&lf.body)) {
    std::optional<double> v = ParseDecimal(value);
    return v.has_value() && *v >= range->lo && *v <= range->hi;
  }
  if (const auto* set = std::get_if<ValueSet>(&lf.body)) {
    return set->values.contains(std::string(value));
  }
  return true;
}

std::vector<LabelingFunction> InferLabelingFunctions(
    const Column& column, const ColumnProfile& profile,
    const TableContext& context, std::string_view asserted_type,
    std::string_view provenance, const LfInferenceOptions& options) {
  std::vector<LfBody> bodies;
  if (column.primitive == Primitive::kNumeric &&
      profile.numeric_stats.has_value()) {
    const NumericStats& stats = *profile.numeric_stats;
    bodies.emplace_back(NumericRange{stats.mean - options.alpha * stats.std,
                                     stats.mean + options.alpha * stats.std});
    bodies.emplace_back(NumericRange{stats.min, stats.max});
  } else if (profile.n_present() > 0) {
    ValueSet set;
    set.min_overlap_fraction = options.value_set_overlap;
    for (const auto& [value, count] : profile.top_values) {
      set.values.insert(value);
    }
    bodies.emplace_back(std::move(set));
    const double r = profile.unique_ratio();
    bodies.emplace_back(UniqueRatioBand{0.5 * r, std::min(1.0, 1.5 * r)});
  }
  // An empty header yields no HeaderToken LF: it could never match.
  const std::vector<std::string> tokens = Tokenize(context.header);
  if (!tokens.empty()) {
    bodies.emplace_back(
        HeaderToken{std::set<std::string>(tokens.begin(), tokens.end())});
  }
  if (context.left_type.has_value()) {
    bodies.emplace_back(CoOccurrence{*context.left_type, Direction::kLeft});
  }
  if (context.right_type.has_value()) {
    bodies.emplace_back(CoOccurrence{*context.right_type, Direction::kRight});
  }

  std::vector<LabelingFunction> lfs;
  lfs.reserve(bodies.size());
  for (size_t i = 0; i < bodies.size(); ++i) {
    lfs.push_back(LabelingFunction{StrCat(provenance, ":", i),
                                   std::string(asserted_type),
                                   std::move(bodies[i]),
                                   std::string(provenance)});
  }
  return lfs;
}

}  // namespace coltype
