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

#include <algorithm>
#include <numeric>

#include <boost/regex.hpp>

#include "coltype/text.h"

namespace coltype {

namespace {

const boost::regex& Compiled(const RegexBody& body) {
  return *static_cast<const boost::regex*>(body.compiled.get());
}

}  // namespace

std::string_view RuleOriginName(RuleOrigin origin) {
  switch (origin) {
    case RuleOrigin::kBuiltin:
      return "builtin";
    case RuleOrigin::kKb:
      return "kb";
    case RuleOrigin::kUser:
      return "user";
    case RuleOrigin::kDpbdGlobal:
      return "dpbd-global";
    case RuleOrigin::kDpbdLocal:
      return "dpbd-local";
  }
  return "builtin";
}

std::optional<RuleOrigin> ParseRuleOrigin(std::string_view name) {
  for (RuleOrigin origin :
       {RuleOrigin::kBuiltin, RuleOrigin::kKb, RuleOrigin::kUser,
        RuleOrigin::kDpbdGlobal, RuleOrigin::kDpbdLocal}) {
    if (RuleOriginName(origin) == name) return origin;
  }
  return std::nullopt;
}

bool LookupRule::MatchesValue(std::string_view value) const {
  if (const auto* regex = std::get_if<RegexBody>(&body)) {
    return boost::regex_match(value.begin(), value.end(), Compiled(*regex));
  }
  if (const auto* dict = std::get_if<DictionaryBody>(&body)) {
    return dict->values.contains(dict->case_fold ? AsciiLower(value)
                                                 : std::string(value));
  }
  return false;
}

absl::StatusOr<LookupRule> MakeRegexRule(std::string rule_id,
                                         std::string type_id,
                                         std::string pattern,
                                         RuleOrigin origin) {
  std::shared_ptr<const boost::regex> compiled;
  try {
    compiled = std::make_shared<const boost::regex>(pattern);
  } catch (const boost::regex_error& e) {
    return absl::InvalidArgumentError(
        StrCat("invalid regex for rule '", rule_id, "' at position ",
                     e.position(), ": ", e.what()));
  }
  LookupRule rule;
  rule.rule_id = std::move(rule_id);
  rule.type_id = std::move(type_id);
  rule.body = RegexBody{std::move(pattern), std::move(compiled)};
  rule.origin = origin;
  return rule;
}

absl::StatusOr<LookupRule> MakeDictionaryRule(std::string rule_id,
                                              std::string type_id,
                                              std::vector<std::string> values,
                                              bool case_fold,
                                              RuleOrigin origin) {
  DictionaryBody dict;
  dict.case_fold = case_fold;
  for (const std::string& value : values) {
    std::string_view trimmed = TrimWhitespace(value);
    if (trimmed.empty()) continue;
    dict.values.insert(case_fold ? AsciiLower(trimmed) : std::string(trimmed));
  }
  if (dict.values.empty()) {
    return absl::InvalidArgumentError(
        StrCat("dictionary rule '", rule_id, "' has no values"));
  }
  LookupRule rule;
  rule.rule_id = std::move(rule_id);
  rule.type_id = std::move(type_id);
  rule.body = std::move(dict);
  rule.origin = origin;
  return rule;
}

LookupRule MakeLfRule(const LabelingFunction& lf, RuleOrigin origin) {
  LookupRule rule;
  rule.rule_id = StrCat("lf:", lf.lf_id);
  rule.type_id = lf.type_id;
  rule.body = LfRefBody{lf.lf_id};
  rule.origin = origin;
  return rule;
}

absl::StatusOr<std::string> RuleRegistry::Register(LookupRule rule,
                                                   const Ontology& ontology) {
  if (rules_.contains(rule.rule_id)) {
    return absl::AlreadyExistsError(
        StrCat("rule '", rule.rule_id, "' already registered"));
  }
  if (!ontology.Contains(rule.type_id)) {
    return absl::InvalidArgumentError(StrCat(
        "rule '", rule.rule_id, "' targets unknown type '", rule.type_id, "'"));
  }
  if (const auto* dict = std::get_if<DictionaryBody>(&rule.body);
      dict != nullptr && dict->values.empty()) {
    return absl::InvalidArgumentError(
        StrCat("dictionary rule '", rule.rule_id, "' has no values"));
  }
  std::string id = rule.rule_id;
  rules_.emplace(id, std::move(rule));
  return id;
}

absl::Status RuleRegistry::Remove(std::string_view rule_id) {
  auto it = rules_.find(rule_id);
  if (it == rules_.end()) {
    return absl::NotFoundError(StrCat("no rule '", rule_id, "'"));
  }
  rules_.erase(it);
  return absl::OkStatus();
}

const LookupRule* RuleRegistry::Find(std::string_view rule_id) const {
  auto it = rules_.find(rule_id);
  return it == rules_.end() ? nullptr : &it->second;
}

std::vector<LookupRule> RuleRegistry::rules() const {
  std::vector<LookupRule> out;
  out.reserve(rules_.size());
  for (const auto& [id, rule] : rules_) out.push_back(rule);
  return out;
}

ValueSample SampleValues(const Column& column, size_t cap, uint64_t seed) {
  ValueSample sample;
  sample.seed = seed;
  std::vector<size_t> positions;
  for (size_t i = 0; i < column.values.size(); ++i) {
    if (!column.values[i].empty()) positions.push_back(i);
  }
  sample.source_size = positions.size();
  cap = std::max<size_t>(cap, 1);
  if (positions.size() > cap) {
    Lcg64 rng(seed);
    const size_t n = positions.size();
    for (size_t i = 0; i < cap; ++i) {
      const size_t j = i + rng.Below(n - i);
      std::swap(positions[i], positions[j]);
    }
    positions.resize(cap);
    std::sort(positions.begin(), positions.end());
  }
  sample.values.reserve(positions.size());
  for (size_t p : positions) sample.values.push_back(column.values[p]);
  return sample;
}

absl::StatusOr<StagePrediction> ApplyLookup(const ValueSample& sample,
                                            std::span<const LookupRule> rules,
                                            const LfRegistry& lfs,
                                            const LookupContext* context) {
  StagePrediction prediction{Stage::kLookup, {}};
  // Resolve LF votes once per rule; configuration errors surface even for an
  // empty sample.
  std::vector<const LabelingFunction*> lf_of(rules.size(), nullptr);
  std::vector<bool> lf_matches(rules.size(), false);
  for (size_t r = 0; r < rules.size(); ++r) {
    const auto* ref = std::get_if<LfRefBody>(&rules[r].body);
    if (ref == nullptr) continue;
    auto it = lfs.find(ref->lf_id);
    if (it == lfs.end()) {
      return absl::FailedPreconditionError(
          StrCat("rule '", rules[r].rule_id,
                       "' references unknown labeling function '", ref->lf_id,
                       "'"));
    }
    lf_of[r] = &it->second;
    lf_matches[r] = context != nullptr && context->column != nullptr &&
                    context->profile != nullptr &&
                    EvaluateLf(it->second, *context->column, *context->profile,
                               context->table) == LfVote::kMatch;
  }
  if (sample.values.empty()) return prediction;

  std::map<std::string, std::vector<bool>, std::less<>> matched;
  for (size_t r = 0; r < rules.size(); ++r) {
    const LookupRule& rule = rules[r];
    if (lf_of[r] != nullptr && !lf_matches[r]) continue;
    std::vector<bool>& hits = matched[rule.type_id];
    hits.resize(sample.values.size(), false);
    for (size_t v = 0; v < sample.values.size(); ++v) {
      if (hits[v]) continue;
      const std::string_view value = TrimWhitespace(sample.values[v]);
      hits[v] = lf_of[r] != nullptr ? LfAcceptsValue(*lf_of[r], value)
                                    : rule.MatchesValue(value);
    }
  }
  const double n = static_cast<double>(sample.values.size());
  for (const auto& [type_id, hits] : matched) {
    const auto k = std::count(hits.begin(), hits.end(), true);
    if (k > 0) prediction.scores[type_id] = static_cast<double>(k) / n;
  }
  return prediction;
}

absl::StatusOr<std::vector<LookupRule>> ParseRegexPack(std::string_view content,
                                                       RuleOrigin origin) {
  std::vector<LookupRule> rules;
  int line_number = 0;
  for (std::string_view line : Split(content, '\n')) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (TrimWhitespace(line).empty() || line.front() == '#') continue;
    std::vector<std::string_view> fields = SplitN(line, '\t', 3);
    if (fields.size() != 3) {
      return absl::InvalidArgumentError(StrCat(
          "line ", line_number, ": expected rule_id<TAB>type_id<TAB>pattern"));
    }
    absl::StatusOr<LookupRule> rule =
        MakeRegexRule(std::string(fields[0]), std::string(fields[1]),
                      std::string(fields[2]), origin);
    if (!rule.ok()) {
      return absl::InvalidArgumentError(
          StrCat("line ", line_number, ": ", std::string(rule.status().message())));
    }
    rules.push_back(*std::move(rule));
  }
  return rules;
}

std::vector<std::string> ParseDictionary(std::string_view content) {
  std::vector<std::string> values;
  for (std::string_view line : Split(content, '\n')) {
    line = TrimWhitespace(line);
    if (line.empty() || line.front() == '#') continue;
    values.emplace_back(line);
  }
  return values;
}

std::string_view BuiltinRegexPack() {
  return R"(# rule_id	type_id	pattern
date_iso	date	\d{4}-\d{2}-\d{2}([T ]\d{2}:\d{2}(:\d{2})?)?
date_us	date	\d{1,2}/\d{1,2}/\d{4}
email	email	[A-Za-z0-9._%+-]+@[A-Za-z0-9.-]+\.[A-Za-z]{2,}
url	url	(https?://|www\.)[A-Za-z0-9.-]+\.[A-Za-z]{2,}(/\S*)?
ipv4	ip_address	((25[0-5]|2[0-4]\d|1?\d?\d)\.){3}(25[0-5]|2[0-4]\d|1?\d?\d)
zip_us	zip_code	\d{5}(-\d{4})?
phone_us	phone	(\+1[ -]?)?\(?\d{3}\)?[ .-]?\d{3}[ .-]\d{4}
currency	price	[$€£]\s?\d{1,3}(,\d{3})*(\.\d{2})?|[$€£]\s?\d+(\.\d{2})?
)";
}

}  // namespace coltype
