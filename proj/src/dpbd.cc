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

#include "coltype/dpbd.h"

#include <algorithm>
#include <set>

#include "coltype/text.h"

namespace coltype {

TableContext CorpusContext(const AnnotatedTable& table, size_t column) {
  TableContext context;
  context.header = table.table.columns[column].header;
  if (column > 0 && !table.annotation(column - 1).empty()) {
    context.left_type = std::string(table.annotation(column - 1));
  }
  if (column + 1 < table.table.columns.size() &&
      !table.annotation(column + 1).empty()) {
    context.right_type = std::string(table.annotation(column + 1));
  }
  return context;
}

absl::StatusOr<GeneratedData> GenerateTrainingData(
    std::span<const AnnotatedTable> corpus,
    std::span<const LabelingFunction> lfs, int min_votes, size_t cap,
    const EmbeddingStore& embeddings, double weight) {
  if (min_votes < 1) return absl::InvalidArgumentError("min_votes must be >= 1");
  GeneratedData data;
  if (lfs.empty() || cap == 0) return data;
  const std::string& type_id = lfs.front().type_id;
  for (const LabelingFunction& lf : lfs) {
    if (lf.type_id != type_id) {
      return absl::InvalidArgumentError(
          StrCat("labeling functions target both '", type_id, "' and '",
                 lf.type_id, "'"));
    }
  }
  for (size_t t = 0; t < corpus.size(); ++t) {
    const AnnotatedTable& table = corpus[t];
    for (size_t c = 0; c < table.table.columns.size(); ++c) {
      const Column& column = table.table.columns[c];
      const ColumnProfile profile = ProfileColumn(column);
      const TableContext context = CorpusContext(table, c);
      int votes = 0;
      for (const LabelingFunction& lf : lfs) {
        if (EvaluateLf(lf, column, profile, context) == LfVote::kMatch) {
          ++votes;
        }
      }
      if (votes < min_votes) continue;
      LabeledExample example;
      example.features = ExtractFeatures(column, profile, embeddings);
      example.type_id = type_id;
      example.weight = weight;
      example.origin = ExampleOrigin::kDpbdGenerated;
      example.source = StrCat("corpus:", table.table.table_id, "#", c);
      data.examples.push_back(std::move(example));
      data.matched.push_back({t, c});
      if (data.examples.size() >= cap) return data;
    }
  }
  return data;
}

absl::Status RetrainLocal(const GlobalModel& global, TenantModel& tenant) {
  std::vector<LabeledExample> examples = global.training_examples;
  examples.insert(examples.end(), tenant.examples.begin(),
                  tenant.examples.end());
  std::set<std::string> labels;
  if (global.params) {
    labels.insert(global.params->labels.begin(), global.params->labels.end());
  }
  for (const std::string& id : tenant.UserTypeIds()) labels.insert(id);
  for (const LabeledExample& example : examples) labels.insert(example.type_id);
  labels.insert(std::string(kUnknownTypeId));
  const TrainConfig config =
      global.params ? global.params->train_config : TrainConfig{};
  absl::StatusOr<ClassifierParams> params =
      Train(examples, std::vector<std::string>(labels.begin(), labels.end()),
            config);
  if (!params.ok()) return params.status();
  tenant.params = *std::move(params);
  return absl::OkStatus();
}

namespace {

std::string ExampleSource(std::string_view table_id, size_t column) {
  return StrCat(table_id, "#", column);
}

// Inserts or replaces the feedback-table example for one column.
void PutTableExample(TenantModel& tenant, LabeledExample example) {
  for (LabeledExample& existing : tenant.examples) {
    if (existing.origin == ExampleOrigin::kFeedbackTable &&
        existing.source == example.source) {
      existing = std::move(example);
      return;
    }
  }
  tenant.examples.push_back(std::move(example));
}

LabeledExample TableExample(const Table& table, size_t column,
                            std::string type_id,
                            const EmbeddingStore& embeddings) {
  LabeledExample example;
  const Column& col = table.columns[column];
  example.features = ExtractFeatures(col, ProfileColumn(col), embeddings);
  example.type_id = std::move(type_id);
  example.weight = 1.0;
  example.origin = ExampleOrigin::kFeedbackTable;
  example.source = ExampleSource(table.table_id, column);
  return example;
}

// Resolves the asserted type against the tenant ontology. Returns "" when it
// does not resolve.
std::string ResolveType(const Ontology& ontology, std::string_view asserted) {
  if (ontology.Contains(asserted)) return std::string(asserted);
  if (const SemanticType* type = ontology.ResolveName(asserted)) {
    return type->id;
  }
  return "";
}

absl::Status ValidateEvent(const FeedbackEvent& event, const Table& table) {
  if (event.event_id.empty()) {
    return absl::InvalidArgumentError("event_id must not be empty");
  }
  if (event.table_id != table.table_id) {
    return absl::InvalidArgumentError(
        StrCat("event references table '", event.table_id, "' but '",
               table.table_id, "' was supplied"));
  }
  if (event.column_index >= table.columns.size()) {
    return absl::NotFoundError(StrCat("table '", table.table_id,
                                      "' has no column ", event.column_index));
  }
  if (NormalizeName(event.asserted_type).empty()) {
    return absl::InvalidArgumentError("asserted_type normalizes to empty");
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<AdaptationReport> ProcessFeedback(const GlobalModel& global,
                                                 TenantModel& tenant,
                                                 const FeedbackEvent& event,
                                                 const Table& table) {
  if (auto it = tenant.reports.find(event.event_id);
      it != tenant.reports.end()) {
    return it->second;
  }
  if (absl::Status status = ValidateEvent(event, table); !status.ok()) {
    return status;
  }
  const PipelineConfig& config = global.config;

  // Work on a copy so that a failure leaves the tenant untouched.
  TenantModel next = tenant;
  AdaptationReport report;
  report.event_id = event.event_id;
  report.kind = event.kind;

  // Predictions before this event supply neighbor types and implicit labels.
  absl::StatusOr<std::vector<FinalPrediction>> before =
      RunPipeline(table, MakePipelineModel(global, tenant), config);
  if (!before.ok()) return before.status();

  std::string type_id = ResolveType(next.ontology, event.asserted_type);
  const std::string predicted =
      ResolveType(next.ontology, event.predicted_type);
  if (event.kind == FeedbackKind::kExplicitCorrection) {
    if (type_id.empty()) {
      absl::StatusOr<SemanticType> added =
          next.ontology.AddUserType(event.asserted_type);
      if (!added.ok()) return added.status();
      type_id = added->id;
      next.user_type_names.push_back(event.asserted_type);
      next.weights.local_only_types.insert(type_id);
      report.created_type = true;
    }
    if (type_id == kUnknownTypeId) {
      return absl::InvalidArgumentError("cannot correct a column to unknown");
    }
    if (!predicted.empty() && predicted == type_id) {
      return absl::InvalidArgumentError(
          "explicit_correction requires asserted_type != predicted_type");
    }
  } else {
    if (type_id.empty()) {
      return absl::InvalidArgumentError(StrCat(
          "approved type '", event.asserted_type, "' is not in the ontology"));
    }
    if (predicted != type_id) {
      return absl::InvalidArgumentError(
          "approvals require asserted_type == predicted_type");
    }
  }
  report.type_id = type_id;

  auto& labels = next.table_labels[table.table_id];
  auto label_of = [&](size_t c) -> std::optional<std::string> {
    if (auto it = labels.find(c); it != labels.end()) return it->second;
    const FinalPrediction& p = (*before)[c];
    if (!p.abstained && p.top_type != kUnknownTypeId) return p.top_type;
    return std::nullopt;
  };

  if (event.kind == FeedbackKind::kExplicitCorrection) {
    const size_t c = event.column_index;
    const Column& column = table.columns[c];
    TableContext context;
    context.header = column.header;
    if (c > 0) context.left_type = label_of(c - 1);
    if (c + 1 < table.columns.size()) context.right_type = label_of(c + 1);
    LfInferenceOptions options;
    options.alpha = config.lf_alpha;
    report.new_lfs = InferLabelingFunctions(
        column, ProfileColumn(column), context, type_id, event.event_id,
        options);
    for (const LabelingFunction& lf : report.new_lfs) {
      next.lfs[lf.lf_id] = lf;
      absl::StatusOr<std::string> rule_id = next.rules.Register(
          MakeLfRule(lf, RuleOrigin::kDpbdLocal), next.ontology);
      if (!rule_id.ok()) return rule_id.status();
    }
    absl::StatusOr<GeneratedData> generated = GenerateTrainingData(
        global.corpus, report.new_lfs, config.min_votes,
        config.generation_cap, global.embeddings, config.weak_weight);
    if (!generated.ok()) return generated.status();
    report.n_generated = generated->examples.size();
    for (LabeledExample& example : generated->examples) {
      next.examples.push_back(std::move(example));
    }

    labels[c] = type_id;
    // The whole table joins the training data: asserted labels where the
    // user gave them, confident predictions elsewhere.
    for (size_t col = 0; col < table.columns.size(); ++col) {
      std::optional<std::string> label = label_of(col);
      if (!label) continue;
      PutTableExample(next, TableExample(table, col, *label,
                                         global.embeddings));
      ++report.n_table_examples;
    }
    next.weights = UpdateWeights(next.weights, type_id,
                                 WeightOutcome::kCorrectionRecorded);
    if (absl::Status status = RetrainLocal(global, next); !status.ok()) {
      return status;
    }
    next.pending_approval_examples = 0;
    report.retrained = true;
  } else {
    labels[event.column_index] = type_id;
    PutTableExample(next, TableExample(table, event.column_index, type_id,
                                       global.embeddings));
    report.n_table_examples = 1;
    next.weights = UpdateWeights(next.weights, type_id,
                                 WeightOutcome::kLocalConfirmed);
    if (++next.pending_approval_examples >= config.approval_retrain_every) {
      if (absl::Status status = RetrainLocal(global, next); !status.ok()) {
        return status;
      }
      next.pending_approval_examples = 0;
      report.retrained = true;
    }
  }
  report.weight_updates[type_id] = next.weights.Local(type_id);

  next.reports[event.event_id] = report;
  ++next.events_applied;
  tenant = std::move(next);
  return report;
}

}  // namespace coltype
