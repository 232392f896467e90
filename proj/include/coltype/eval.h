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

#ifndef COLTYPE_EVAL_H_
#define COLTYPE_EVAL_H_

#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "coltype/ensemble.h"
#include "coltype/serialization.h"
#include "coltype/table.h"

namespace coltype {

// One labeled column and what the pipeline said about it.
struct LabeledPrediction {
  std::string table_id;
  std::string truth;
  FinalPrediction prediction;
};

struct TypeStats {
  size_t support = 0;    // Columns whose truth is this type.
  size_t predicted = 0;  // Non-abstained predictions of this type.
  size_t correct = 0;
  std::optional<double> precision() const {
    if (predicted == 0) return std::nullopt;
    return static_cast<double>(correct) / static_cast<double>(predicted);
  }
};

// Abstained columns appear in the confusion summary as "(abstain)".
inline constexpr char kAbstainLabel[] = "(abstain)";

struct EvalReport {
  size_t total = 0;
  size_t predicted = 0;
  size_t correct = 0;
  std::optional<double> precision;  // Null when nothing was predicted.
  double coverage = 0.0;
  std::map<std::string, TypeStats> per_type;
  std::map<std::pair<std::string, std::string>, size_t> confusion;
  double tau = 0.0;
  double stage_gate = 0.0;
};

// Ground truth as the model can express it: labels outside `ontology` are
// `unknown`.
std::string EffectiveTruth(std::string_view label, const Ontology& ontology);

// Runs the pipeline over every table and keeps the labeled columns.
absl::StatusOr<std::vector<LabeledPrediction>> PredictCorpus(
    std::span<const AnnotatedTable> corpus, const PipelineModel& model,
    const PipelineConfig& config);

// Precision/coverage with every prediction re-thresholded at `tau`.
EvalReport Evaluate(std::span<const LabeledPrediction> predictions,
                    double tau, double stage_gate, int top_k);

// Evaluate() at every grid point k / 100.
std::vector<EvalReport> SweepTau(
    std::span<const LabeledPrediction> predictions, double stage_gate,
    int top_k);

std::vector<ScoredPrediction> ToScored(
    std::span<const LabeledPrediction> predictions);

Json EvalReportToJson(const EvalReport& report);
std::string EvalReportToText(const EvalReport& report);

}  // namespace coltype

#endif  // COLTYPE_EVAL_H_
