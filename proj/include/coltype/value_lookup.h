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

#ifndef COLTYPE_VALUE_LOOKUP_H_
#define COLTYPE_VALUE_LOOKUP_H_

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "coltype/labeling_function.h"
#include "coltype/ontology.h"
#include "coltype/prediction.h"
#include "coltype/table.h"

namespace coltype {

enum class RuleOrigin { kBuiltin, kKb, kUser, kDpbdGlobal, kDpbdLocal };

std::string_view RuleOriginName(RuleOrigin origin);
std::optional<RuleOrigin> ParseRuleOrigin(std::string_view name);

struct RegexBody {
  std::string pattern;
  // Compiled form; shared between copies of the rule.
  std::shared_ptr<const void> compiled;
};

struct DictionaryBody {
  std::set<std::string> values;  // Lowercased when case_fold is set.
  bool case_fold = true;
};

struct LfRefBody {
  std::string lf_id;
};

struct LookupRule {
  std::string rule_id;
  std::string type_id;
  std::variant<RegexBody, DictionaryBody, LfRefBody> body;
  RuleOrigin origin = RuleOrigin::kBuiltin;

  // True when `value` (already trimmed) satisfies a regex or dictionary
  // body. LF references are evaluated by ApplyLookup.
  bool MatchesValue(std::string_view value) const;
};

// Compiles `pattern`; an invalid pattern yields an error naming the position.
absl::StatusOr<LookupRule> MakeRegexRule(std::string rule_id,
                                         std::string type_id,
                                         std::string pattern,
                                         RuleOrigin origin);
absl::StatusOr<LookupRule> MakeDictionaryRule(std::string rule_id,
                                              std::string type_id,
                                              std::vector<std::string> values,
                                              bool case_fold,
                                              RuleOrigin origin);
LookupRule MakeLfRule(const LabelingFunction& lf, RuleOrigin origin);

// Rules by id.
class RuleRegistry {
 public:
  // Fails with AlreadyExists on a duplicate id and InvalidArgument when the
  // target type is not in `ontology`.
  absl::StatusOr<std::string> Register(LookupRule rule,
                                       const Ontology& ontology);
  absl::Status Remove(std::string_view rule_id);

  const LookupRule* Find(std::string_view rule_id) const;
  std::vector<LookupRule> rules() const;
  size_t size() const { return rules_.size(); }
  bool empty() const { return rules_.empty(); }

 private:
  std::map<std::string, LookupRule, std::less<>> rules_;
};

struct ValueSample {
  std::vector<std::string> values;
  uint64_t seed = 0;
  size_t source_size = 0;  // Non-missing values in the source column.
};

inline constexpr size_t kDefaultSampleCap = 100;

// The 64-bit LCG behind SampleValues (Knuth's MMIX constants); Next()
// returns the high 31 bits of the advanced state.
class Lcg64 {
 public:
  explicit Lcg64(uint64_t seed) : state_(seed) {}
  uint64_t Next() {
    state_ = state_ * 6364136223846793005ULL + 1442695040888963407ULL;
    return state_ >> 33;
  }
  // Uniform-ish index in [0, n).
  size_t Below(size_t n) { return static_cast<size_t>(Next() % n); }

 private:
  uint64_t state_;
};

// Uniform sample without replacement of the non-missing values: a partial
// Fisher-Yates shuffle over value positions driven by Lcg64(seed). The chosen
// values keep their column order. Columns with at most `cap` non-missing
// values are returned whole.
ValueSample SampleValues(const Column& column, size_t cap, uint64_t seed);

// Column-level inputs needed by LF-backed rules.
struct LookupContext {
  const Column* column = nullptr;
  const ColumnProfile* profile = nullptr;
  TableContext table;
};

// For each type, the fraction of sampled values matched by at least one rule
// targeting it. An LF-backed rule matches a value when the LF votes match on
// the column and the value lies inside the LF's range/set (LFs without a
// value-level body accept every value). Without a context, LF rules abstain.
absl::StatusOr<StagePrediction> ApplyLookup(
    const ValueSample& sample, std::span<const LookupRule> rules,
    const LfRegistry& lfs, const LookupContext* context = nullptr);

// Rule packs on disk.
//   regex pack: "rule_id<TAB>type_id<TAB>pattern" per line, '#' comments.
//   dictionary: one value per line, '#' comments.
absl::StatusOr<std::vector<LookupRule>> ParseRegexPack(std::string_view content,
                                                       RuleOrigin origin);
std::vector<std::string> ParseDictionary(std::string_view content);

// Built-in regex pack: ISO/US dates, emails, URLs, IPv4, ZIP codes, phone
// numbers and currency amounts.
std::string_view BuiltinRegexPack();

}  // namespace coltype

#endif  // COLTYPE_VALUE_LOOKUP_H_
