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

#ifndef COLTYPE_ENSEMBLE_H_
#define COLTYPE_ENSEMBLE_H_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "coltype/classifier.h"
#include "coltype/header_matcher.h"
#include "coltype/labeling_function.h"
#include "coltype/ontology.h"
#include "coltype/prediction.h"
#include "coltype/table.h"
#include "coltype/value_lookup.h"

namespace coltype {

// Per-type influence of the tenant's local model. For a type the global
// model knows, w_local(t) = n_t / (n_t + k0) where n_t counts confirmations
// and corrections of t. Types that exist only in the tenant (user types) have
// no global evidence and get w_local = 1.
struct ModelWeights {
  std::map<std::string, int64_t, std::less<>> feedback_counts;
  double prior_strength = 5.0;  // k0
  std::set<std::string, std::less<>> local_only_types;

  int64_t Count(std::string_view type_id) const;
  double Local(std::string_view type_id) const;
  double Global(std::string_view type_id) const {
    return 1.0 - Local(type_id);
  }

  bool operator==(const ModelWeights&) const = default;
};

enum class WeightOutcome { kLocalConfirmed, kCorrectionRecorded };

// Increments n_t; every other type is untouched.
ModelWeights UpdateWeights(const ModelWeights& weights,
                           std::string_view type_id, WeightOutcome outcome);

struct PipelineConfig {
  double stage_gate = 0.95;         // c
  double abstain_threshold = 0.5;   // tau
  int top_k = 3;                    // k
  size_t sample_cap = kDefaultSampleCap;
  double fuzzy_floor = kDefaultFuzzyFloor;
  size_t max_rows = 10000;
  // Adaptation loop.
  double prior_strength = 5.0;  // k0
  double lf_alpha = 1.0;
  int min_votes = 2;
  double weak_weight = 0.5;
  size_t generation_cap = 500;
  size_t approval_retrain_every = 10;

  absl::Status Validate() const;
};

enum class Side { kGlobal, kLocal };
std::string_view SideName(Side side);

struct StageTrace {
  Stage stage = Stage::kHeader;
  Side side = Side::kGlobal;
  std::map<std::string, double, std::less<>> scores;
};

struct RankedType {
  std::string type_id;
  double confidence = 0.0;
  bool operator==(const RankedType&) const = default;
};

struct FinalPrediction {
  size_t column_index = 0;
  std::string header;
  // Non-increasing confidence, ties by type id; at most k entries. When
  // abstained: [(unknown, 1 - top)].
  std::vector<RankedType> ranked;
  bool abstained = false;
  std::vector<StageTrace> stages;
  // Best blended type before abstention ("" when no type scored).
  std::string top_type;
  double top_confidence = 0.0;
  // Every positively scored type in rank order, before tau and k apply.
  std::vector<RankedType> candidates;
};

// Soft majority vote. g(t) is the mean of t's confidence over the global
// traces (a type missing from a trace counts 0); l(t) the mean over the
// non-empty local traces (0 if there are none). blended(t) =
// w_global(t) g(t) + w_local(t) l(t). A column with no positive blended score
// abstains.
FinalPrediction CombineScores(std::span<const StagePrediction> global,
                              std::span<const StagePrediction> local,
                              const ModelWeights& weights, double tau,
                              int top_k);

// One side (global or tenant-local) of the pipeline.
struct SideModel {
  // Types the header stage may emit on this side; empty disables the stage.
  TypeFilter header_types;
  std::vector<LookupRule> rules;
  const LfRegistry* lfs = nullptr;
  const ClassifierParams* params = nullptr;  // Null: no classifier stage.
};

struct PipelineModel {
  const Ontology* ontology = nullptr;
  const EmbeddingStore* embeddings = nullptr;
  SideModel global;
  SideModel local;
  ModelWeights weights;
};

// Seed of the value sample for one column of a stored table.
uint64_t SampleSeed(std::string_view table_id, size_t column_index);

// Runs header -> lookup -> classifier. After each stage, columns whose
// running blended top confidence reaches the stage gate are frozen and skip
// later stages. Both sides run for every stage that runs; a local stage with
// nothing to offer contributes nothing. LF-backed lookup rules see the
// confident (>= tau) running types of the immediate neighbors.
absl::StatusOr<std::vector<FinalPrediction>> RunPipeline(
    const Table& table, const PipelineModel& model,
    const PipelineConfig& config);

// Derives ranked/abstained from the candidates under a new tau and k.
FinalPrediction ApplyThreshold(const FinalPrediction& prediction, double tau,
                               int top_k);

struct ScoredPrediction {
  double top_confidence = 0.0;
  bool correct = false;
};

struct TauCalibration {
  double tau = 1.0;
  bool warning = false;  // Target precision unattainable on the grid.
  std::optional<double> precision;
  double coverage = 0.0;
};

// Grid point k / 100 as a threshold.
inline double TauGridValue(int k) { return static_cast<double>(k) / 100.0; }

// Smallest tau on {0, 0.01, ..., 1} whose precision over non-abstained
// predictions (top_confidence >= tau) reaches target_precision. A grid point
// where nothing is predicted does not qualify. Falls back to tau = 1 with the
// warning set.
TauCalibration CalibrateTau(std::span<const ScoredPrediction> validation,
                            double target_precision);

}  // namespace coltype

#endif  // COLTYPE_ENSEMBLE_H_
