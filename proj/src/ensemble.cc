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

#include "coltype/ensemble.h"

#include <algorithm>

#include "coltype/text.h"

namespace coltype {

int64_t ModelWeights::Count(std::string_view type_id) const {
  auto it = feedback_counts.find(type_id);
  return it == feedback_counts.end() ? 0 : it->second;
}

double ModelWeights::Local(std::string_view type_id) const {
  if (local_only_types.contains(type_id)) return 1.0;
  const double n = static_cast<double>(Count(type_id));
  if (n == 0.0) return 0.0;
  return n / (n + prior_strength);
}

ModelWeights UpdateWeights(const ModelWeights& weights,
                           std::string_view type_id, WeightOutcome outcome) {
  (void)outcome;  // Both outcomes count as evidence for the local model.
  ModelWeights updated = weights;
  ++updated.feedback_counts[std::string(type_id)];
  return updated;
}

absl::Status PipelineConfig::Validate() const {
  auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!in_unit(stage_gate)) {
    return absl::InvalidArgumentError("stage_gate must lie in [0, 1]");
  }
  if (!in_unit(abstain_threshold)) {
    return absl::InvalidArgumentError("abstain_threshold must lie in [0, 1]");
  }
  if (top_k < 1) return absl::InvalidArgumentError("top_k must be >= 1");
  if (sample_cap < 1) {
    return absl::InvalidArgumentError("sample_cap must be >= 1");
  }
  if (!in_unit(fuzzy_floor)) {
    return absl::InvalidArgumentError("fuzzy_floor must lie in [0, 1]");
  }
  if (max_rows < 1) return absl::InvalidArgumentError("max_rows must be >= 1");
  if (!(prior_strength > 0.0)) {
    return absl::InvalidArgumentError("prior_strength must be > 0");
  }
  if (lf_alpha < 0.0) return absl::InvalidArgumentError("lf_alpha must be >= 0");
  if (min_votes < 1) return absl::InvalidArgumentError("min_votes must be >= 1");
  if (!(weak_weight > 0.0 && weak_weight <= 1.0)) {
    return absl::InvalidArgumentError("weak_weight must lie in (0, 1]");
  }
  if (approval_retrain_every < 1) {
    return absl::InvalidArgumentError("approval_retrain_every must be >= 1");
  }
  return absl::OkStatus();
}

std::string_view StageName(Stage stage) {
  switch (stage) {
    case Stage::kHeader:
      return "header";
    case Stage::kLookup:
      return "lookup";
    case Stage::kClassifier:
      return "classifier";
  }
  return "header";
}

std::string_view SideName(Side side) {
  return side == Side::kLocal ? "local" : "global";
}

FinalPrediction CombineScores(std::span<const StagePrediction> global,
                              std::span<const StagePrediction> local,
                              const ModelWeights& weights, double tau,
                              int top_k) {
  std::map<std::string, double, std::less<>> global_sum;
  std::map<std::string, double, std::less<>> local_sum;
  size_t local_count = 0;
  for (const StagePrediction& trace : global) {
    for (const auto& [id, score] : trace.scores) global_sum[id] += score;
  }
  for (const StagePrediction& trace : local) {
    if (trace.empty()) continue;
    ++local_count;
    for (const auto& [id, score] : trace.scores) local_sum[id] += score;
  }

  std::map<std::string, double, std::less<>> blended;
  const double n_global = static_cast<double>(global.size());
  for (const auto& [id, sum] : global_sum) {
    blended[id] += weights.Global(id) * (sum / n_global);
  }
  for (const auto& [id, sum] : local_sum) {
    blended[id] +=
        weights.Local(id) * (sum / static_cast<double>(local_count));
  }

  std::vector<RankedType> ranked;
  for (const auto& [id, score] : blended) {
    if (score > 0.0) ranked.push_back({id, score});
  }
  std::sort(ranked.begin(), ranked.end(),
            [](const RankedType& a, const RankedType& b) {
              if (a.confidence != b.confidence) {
                return a.confidence > b.confidence;
              }
              return a.type_id < b.type_id;
            });

  FinalPrediction prediction;
  if (!ranked.empty()) {
    prediction.top_type = ranked.front().type_id;
    prediction.top_confidence = ranked.front().confidence;
  }
  prediction.candidates = std::move(ranked);
  return ApplyThreshold(prediction, tau, top_k);
}

FinalPrediction ApplyThreshold(const FinalPrediction& prediction, double tau,
                               int top_k) {
  FinalPrediction out = prediction;
  if (prediction.top_type.empty() || prediction.top_confidence < tau) {
    out.abstained = true;
    out.ranked = {
        {std::string(kUnknownTypeId), 1.0 - prediction.top_confidence}};
    return out;
  }
  out.abstained = false;
  const size_t k = std::min(out.candidates.size(), static_cast<size_t>(top_k));
  out.ranked.assign(out.candidates.begin(), out.candidates.begin() + k);
  return out;
}

uint64_t SampleSeed(std::string_view table_id, size_t column_index) {
  return Fnv1a64(StrCat(table_id, "#", column_index));
}

namespace {

struct ColumnState {
  std::vector<StagePrediction> global;
  std::vector<StagePrediction> local;
  std::vector<StageTrace> stages;
  bool frozen = false;
};

absl::Status CheckParams(const ClassifierParams* params,
                         const PipelineModel& model, std::string_view side) {
  if (params == nullptr) return absl::OkStatus();
  const size_t expected = kNumProfileFeatures + model.embeddings->dimension();
  if (params->dimension != expected) {
    return absl::DataLossError(
        StrCat(side, " classifier expects ", params->dimension,
               " features but the embedding store yields ", expected));
  }
  if (params->weights.size() != params->labels.size() * params->dimension ||
      params->bias.size() != params->labels.size()) {
    return absl::DataLossError(StrCat(side, " classifier shape is corrupt"));
  }
  for (const std::string& label : params->labels) {
    if (!model.ontology->Contains(label)) {
      return absl::DataLossError(StrCat(side, " classifier label '", label,
                                        "' is not in the ontology"));
    }
  }
  return absl::OkStatus();
}

void Record(ColumnState& state, Side side, const StagePrediction& prediction) {
  if (side == Side::kGlobal) {
    state.global.push_back(prediction);
  } else {
    if (prediction.empty()) return;
    state.local.push_back(prediction);
  }
  state.stages.push_back({prediction.stage, side, prediction.scores});
}

}  // namespace

absl::StatusOr<std::vector<FinalPrediction>> RunPipeline(
    const Table& table, const PipelineModel& model,
    const PipelineConfig& config) {
  if (model.ontology == nullptr || model.embeddings == nullptr) {
    return absl::FailedPreconditionError("incomplete pipeline model");
  }
  if (absl::Status status = config.Validate(); !status.ok()) return status;
  if (absl::Status s = CheckParams(model.global.params, model, "global");
      !s.ok()) {
    return s;
  }
  if (absl::Status s = CheckParams(model.local.params, model, "local");
      !s.ok()) {
    return s;
  }
  static const LfRegistry kNoLfs;
  const LfRegistry& global_lfs =
      model.global.lfs != nullptr ? *model.global.lfs : kNoLfs;
  const LfRegistry& local_lfs =
      model.local.lfs != nullptr ? *model.local.lfs : kNoLfs;

  const size_t n_columns = table.columns.size();
  std::vector<ColumnProfile> profiles;
  profiles.reserve(n_columns);
  for (const Column& column : table.columns) {
    profiles.push_back(ProfileColumn(column));
  }
  std::vector<ColumnState> states(n_columns);
  const ModelWeights& weights = model.weights;

  auto running = [&](const ColumnState& state) {
    return CombineScores(state.global, state.local, weights,
                         config.abstain_threshold, config.top_k);
  };
  auto freeze = [&]() {
    for (ColumnState& state : states) {
      if (state.frozen) continue;
      const FinalPrediction current = running(state);
      state.frozen = !current.top_type.empty() &&
                     current.top_confidence >= config.stage_gate;
    }
  };

  // Header stage.
  for (size_t c = 0; c < n_columns; ++c) {
    const std::string& header = table.columns[c].header;
    Record(states[c], Side::kGlobal,
           MatchHeader(header, *model.ontology, *model.embeddings,
                       config.fuzzy_floor, model.global.header_types));
    if (!model.local.header_types.empty()) {
      Record(states[c], Side::kLocal,
             MatchHeader(header, *model.ontology, *model.embeddings,
                         config.fuzzy_floor, model.local.header_types));
    }
  }
  freeze();

  // Lookup stage. Neighbor context comes from the running predictions.
  std::vector<std::optional<std::string>> confident(n_columns);
  for (size_t c = 0; c < n_columns; ++c) {
    FinalPrediction current = running(states[c]);
    if (!current.abstained) confident[c] = current.top_type;
  }
  for (size_t c = 0; c < n_columns; ++c) {
    if (states[c].frozen) continue;
    const Column& column = table.columns[c];
    LookupContext context;
    context.column = &column;
    context.profile = &profiles[c];
    context.table.header = column.header;
    if (c > 0) context.table.left_type = confident[c - 1];
    if (c + 1 < n_columns) context.table.right_type = confident[c + 1];
    const ValueSample sample = SampleValues(
        column, config.sample_cap, SampleSeed(table.table_id, c));
    absl::StatusOr<StagePrediction> global =
        ApplyLookup(sample, model.global.rules, global_lfs, &context);
    if (!global.ok()) return global.status();
    Record(states[c], Side::kGlobal, *global);
    if (!model.local.rules.empty()) {
      absl::StatusOr<StagePrediction> local =
          ApplyLookup(sample, model.local.rules, local_lfs, &context);
      if (!local.ok()) return local.status();
      Record(states[c], Side::kLocal, *local);
    }
  }
  freeze();

  // Classifier stage.
  for (size_t c = 0; c < n_columns; ++c) {
    if (states[c].frozen) continue;
    const Column& column = table.columns[c];
    const FeatureVector features =
        ExtractFeatures(column, profiles[c], *model.embeddings);
    if (model.global.params != nullptr) {
      absl::StatusOr<StagePrediction> global =
          Predict(features, *model.global.params);
      if (!global.ok()) return global.status();
      Record(states[c], Side::kGlobal, *global);
    } else {
      Record(states[c], Side::kGlobal, StagePrediction{Stage::kClassifier, {}});
    }
    if (model.local.params != nullptr) {
      absl::StatusOr<StagePrediction> local =
          Predict(features, *model.local.params);
      if (!local.ok()) return local.status();
      Record(states[c], Side::kLocal, *local);
    }
  }

  std::vector<FinalPrediction> predictions;
  predictions.reserve(n_columns);
  for (size_t c = 0; c < n_columns; ++c) {
    FinalPrediction prediction = running(states[c]);
    prediction.column_index = c;
    prediction.header = table.columns[c].header;
    prediction.stages = std::move(states[c].stages);
    predictions.push_back(std::move(prediction));
  }
  return predictions;
}

TauCalibration CalibrateTau(std::span<const ScoredPrediction> validation,
                            double target_precision) {
  for (int k = 0; k <= 100; ++k) {
    const double tau = TauGridValue(k);
    size_t predicted = 0;
    size_t correct = 0;
    for (const ScoredPrediction& item : validation) {
      if (item.top_confidence < tau) continue;
      ++predicted;
      if (item.correct) ++correct;
    }
    if (predicted == 0) continue;
    const double precision =
        static_cast<double>(correct) / static_cast<double>(predicted);
    if (precision >= target_precision) {
      TauCalibration result;
      result.tau = tau;
      result.precision = precision;
      result.coverage = static_cast<double>(predicted) /
                        static_cast<double>(validation.size());
      return result;
    }
  }
  TauCalibration result;
  result.tau = 1.0;
  result.warning = true;
  size_t predicted = 0;
  size_t correct = 0;
  for (const ScoredPrediction& item : validation) {
    if (item.top_confidence < 1.0) continue;
    ++predicted;
    if (item.correct) ++correct;
  }
  if (predicted > 0) {
    result.precision =
        static_cast<double>(correct) / static_cast<double>(predicted);
  }
  if (!validation.empty()) {
    result.coverage = static_cast<double>(predicted) /
                      static_cast<double>(validation.size());
  }
  return result;
}

}  // namespace coltype
