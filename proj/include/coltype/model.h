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

#ifndef COLTYPE_MODEL_H_
#define COLTYPE_MODEL_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "coltype/classifier.h"
#include "coltype/ensemble.h"
#include "coltype/header_matcher.h"
#include "coltype/labeling_function.h"
#include "coltype/ontology.h"
#include "coltype/table.h"
#include "coltype/value_lookup.h"

namespace coltype {

// Shared model every tenant starts from. Immutable once loaded.
struct GlobalModel {
  Ontology ontology;
  EmbeddingStore embeddings;
  RuleRegistry rules;
  LfRegistry lfs;
  std::optional<ClassifierParams> params;
  // Examples the global classifier was trained on; local retrains start
  // from them.
  std::vector<LabeledExample> training_examples;
  // Source corpus scanned for weakly labeled examples.
  std::vector<AnnotatedTable> corpus;
  PipelineConfig config;
  // Hash of the files the model was loaded from; tenant snapshots taken
  // against another fingerprint are discarded and replayed.
  std::string fingerprint;
};

enum class FeedbackKind {
  kExplicitCorrection,
  kExplicitApproval,
  kImplicitApproval,
};

std::string_view FeedbackKindName(FeedbackKind kind);
std::optional<FeedbackKind> ParseFeedbackKind(std::string_view name);
inline bool IsApproval(FeedbackKind kind) {
  return kind != FeedbackKind::kExplicitCorrection;
}

struct FeedbackEvent {
  std::string event_id;
  std::string tenant_id;
  std::string table_id;
  size_t column_index = 0;
  std::string predicted_type;
  // A type id or name; corrections may name a type that does not exist yet.
  std::string asserted_type;
  FeedbackKind kind = FeedbackKind::kExplicitCorrection;
  std::string timestamp;

  bool operator==(const FeedbackEvent&) const = default;
};

struct AdaptationReport {
  std::string event_id;
  FeedbackKind kind = FeedbackKind::kExplicitCorrection;
  std::string type_id;  // Resolved asserted type.
  bool created_type = false;
  std::vector<LabelingFunction> new_lfs;
  size_t n_generated = 0;
  size_t n_table_examples = 0;
  bool retrained = false;
  // w_local after the update, for the types whose counters moved.
  std::map<std::string, double, std::less<>> weight_updates;

  bool operator==(const AdaptationReport&) const = default;
};

// Everything a tenant has learned. Derived purely from the global model and
// the tenant's feedback log.
struct TenantModel {
  std::string tenant_id;
  // User type names in creation order; replayed onto the global ontology.
  std::vector<std::string> user_type_names;
  Ontology ontology;
  RuleRegistry rules;
  LfRegistry lfs;
  std::optional<ClassifierParams> params;
  ModelWeights weights;
  std::vector<LabeledExample> examples;
  // table_id -> column -> type asserted or approved by the user.
  std::map<std::string, std::map<size_t, std::string>, std::less<>>
      table_labels;
  std::map<std::string, AdaptationReport, std::less<>> reports;
  size_t pending_approval_examples = 0;
  int64_t events_applied = 0;

  int64_t revision() const { return events_applied; }
  std::vector<std::string> UserTypeIds() const;
};

TenantModel NewTenant(const GlobalModel& global, std::string tenant_id);

// Pipeline view over (global, tenant). Both must outlive the result.
PipelineModel MakePipelineModel(const GlobalModel& global,
                                const TenantModel& tenant);
// The global model alone, as seen by a tenant that never gave feedback.
PipelineModel MakeGlobalOnlyModel(const GlobalModel& global);

}  // namespace coltype

#endif  // COLTYPE_MODEL_H_
