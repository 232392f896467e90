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

#ifndef COLTYPE_LABELING_FUNCTION_H_
#define COLTYPE_LABELING_FUNCTION_H_

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "coltype/table.h"

namespace coltype {

struct NumericRange {
  double lo = 0.0;
  double hi = 0.0;
  bool operator==(const NumericRange&) const = default;
};

struct ValueSet {
  std::set<std::string> values;
  double min_overlap_fraction = 0.5;
  bool operator==(const ValueSet&) const = default;
};

struct UniqueRatioBand {
  double lo = 0.0;
  double hi = 1.0;
  bool operator==(const UniqueRatioBand&) const = default;
};

struct HeaderToken {
  std::set<std::string> tokens;
  bool operator==(const HeaderToken&) const = default;
};

enum class Direction { kLeft, kRight, kAny };

std::string_view DirectionName(Direction direction);
std::optional<Direction> ParseDirection(std::string_view name);

struct CoOccurrence {
  std::string neighbor_type_id;
  Direction direction = Direction::kAny;
  bool operator==(const CoOccurrence&) const = default;
};

using LfBody =
    std::variant<NumericRange, ValueSet, UniqueRatioBand, HeaderToken,
                 CoOccurrence>;

std::string_view LfKindName(const LfBody& body);

// A one-sided weak rule for a single target type: it either votes match or
// abstains, never against.
struct LabelingFunction {
  std::string lf_id;
  std::string type_id;
  LfBody body;
  std::string provenance;  // Feedback event id that produced it.

  bool operator==(const LabelingFunction&) const = default;
};

enum class LfVote { kAbstain, kMatch };

// What an LF may see besides the column itself.
struct TableContext {
  std::string header;
  std::optional<std::string> left_type;   // Confident type of left neighbor.
  std::optional<std::string> right_type;  // Confident type of right neighbor.
};

// Share of non-missing values that must lie inside a NumericRange.
inline constexpr double kNumericRangeQuorum = 0.8;
inline constexpr double kHeaderTokenJaccard = 0.5;

// NumericRange: numeric column with >= 80% of non-missing values in
//   [lo, hi].
// ValueSet: share of non-missing values found in the set reaches
//   min_overlap_fraction.
// UniqueRatioBand: unique ratio inside [lo, hi].
// HeaderToken: Jaccard overlap of header tokens >= 0.5.
// CoOccurrence: neighbor type present on the stated side.
LfVote EvaluateLf(const LabelingFunction& lf, const Column& column,
                  const ColumnProfile& profile, const TableContext& context);

// Value-level form used by the lookup stage: whether a single value is inside
// the LF's range or set. LFs without a value-level body accept every value.
bool LfAcceptsValue(const LabelingFunction& lf, std::string_view value);

struct LfInferenceOptions {
  double alpha = 1.0;  // Width of the mean +/- alpha * std band.
  double value_set_overlap = 0.5;
};

// Infers LFs for `asserted_type` from one demonstrated column. Ids are
// "<provenance>:<index>".
std::vector<LabelingFunction> InferLabelingFunctions(
    const Column& column, const ColumnProfile& profile,
    const TableContext& context, std::string_view asserted_type,
    std::string_view provenance, const LfInferenceOptions& options = {});

// LFs by id. Ordered for deterministic iteration and serialization.
using LfRegistry = std::map<std::string, LabelingFunction, std::less<>>;

}  // namespace coltype

#endif  // COLTYPE_LABELING_FUNCTION_H_
