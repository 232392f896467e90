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

#ifndef COLTYPE_SERIALIZATION_H_
#define COLTYPE_SERIALIZATION_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "coltype/classifier.h"
#include "coltype/ensemble.h"
#include "coltype/labeling_function.h"
#include "coltype/model.h"
#include "coltype/ontology.h"
#include "json.hpp"

namespace coltype {

using Json = nlohmann::json;

// Prediction output consumed by the CLI and the review client:
// {table_id, ontology_version, revision, columns: [{column_index, header,
// ranked: [{type, confidence}], abstained, stages: [{stage, side, scores}]}]}
Json PredictionsToJson(std::string_view table_id, int64_t ontology_version,
                       int64_t revision,
                       const std::vector<FinalPrediction>& predictions);
// Compact form with a trailing newline. Identical bytes for identical input.
std::string DumpJson(const Json& json);

Json OntologyToJson(const Ontology& ontology);

Json LabelingFunctionToJson(const LabelingFunction& lf);
absl::StatusOr<LabelingFunction> LabelingFunctionFromJson(const Json& json);

Json LookupRuleToJson(const LookupRule& rule);
absl::StatusOr<LookupRule> LookupRuleFromJson(const Json& json);

Json FeedbackEventToJson(const FeedbackEvent& event);
absl::StatusOr<FeedbackEvent> FeedbackEventFromJson(const Json& json);

Json AdaptationReportToJson(const AdaptationReport& report);
absl::StatusOr<AdaptationReport> AdaptationReportFromJson(const Json& json);

Json LabeledExampleToJson(const LabeledExample& example);
absl::StatusOr<LabeledExample> LabeledExampleFromJson(const Json& json);

Json ClassifierParamsToJson(const ClassifierParams& params);
absl::StatusOr<ClassifierParams> ClassifierParamsFromJson(const Json& json);

Json ModelWeightsToJson(const ModelWeights& weights);
absl::StatusOr<ModelWeights> ModelWeightsFromJson(const Json& json);

// Global classifier file: the params plus the examples they were trained on.
std::string SerializeGlobalParams(
    const ClassifierParams& params,
    const std::vector<LabeledExample>& training_examples);
struct GlobalParamsFile {
  ClassifierParams params;
  std::vector<LabeledExample> training_examples;
};
absl::StatusOr<GlobalParamsFile> ParseGlobalParams(std::string_view content);

// Full tenant state. `fingerprint` identifies the global model the state was
// derived from.
std::string SerializeTenant(const TenantModel& tenant,
                            std::string_view fingerprint);
struct TenantSnapshot {
  TenantModel tenant;
  std::string fingerprint;
};
// User types are replayed onto the global ontology.
absl::StatusOr<TenantSnapshot> ParseTenant(std::string_view content,
                                           const GlobalModel& global);

// Summary served by GET /v1/state and printed by `replay`.
Json TenantStateToJson(const GlobalModel& global, const TenantModel& tenant);

}  // namespace coltype

#endif  // COLTYPE_SERIALIZATION_H_
