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

#ifndef COLTYPE_CLASSIFIER_H_
#define COLTYPE_CLASSIFIER_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "coltype/header_matcher.h"
#include "coltype/ontology.h"
#include "coltype/prediction.h"
#include "coltype/table.h"

namespace coltype {

// Number of profile-derived features ahead of the value embedding.
inline constexpr size_t kNumProfileFeatures = 22;
// Distinct values whose tokens feed the value embedding.
inline constexpr size_t kMaxEmbeddedValues = 50;

// Profile features, in order:
//   0  log1p(n_rows) / 10
//   1  missing fraction
//   2  unique ratio
//   3  log1p(mean length) / 5
//   4-8  char class fractions: digit, alpha, punct, space, other
//   9  numeric stats presence flag
//   10-12  slog(min), slog(max), slog(mean) / 5, slog(x) = sign(x) log1p(|x|)
//   13 log1p(std) / 5
//   14 fraction of integer values
//   15 top-value dominance: top1 count / non-missing
//   16 entropy of the top-value distribution / log(10)
//   17 boolean-likeness, 18 date-likeness: share of values that parse so
//   19 share of values starting with a digit
//   20-21 reserved, always 0
// followed by the mean embedding of the tokens of up to 50 distinct values
// (zero vector when no token is known).
struct FeatureVector {
  std::vector<double> values;
  size_t size() const { return values.size(); }
};

FeatureVector ExtractFeatures(const Column& column,
                              const ColumnProfile& profile,
                              const EmbeddingStore& store);

enum class ExampleOrigin { kSeedCorpus, kFeedbackTable, kDpbdGenerated,
                           kBackground };

std::string_view ExampleOriginName(ExampleOrigin origin);
std::optional<ExampleOrigin> ParseExampleOrigin(std::string_view name);

struct LabeledExample {
  FeatureVector features;
  std::string type_id;
  double weight = 1.0;  // In (0, 1]; weak labels carry less.
  ExampleOrigin origin = ExampleOrigin::kSeedCorpus;
  // "<table_id>#<column>" for examples tied to a stored table, else empty.
  std::string source;
};

struct TrainConfig {
  double learning_rate = 0.1;
  int epochs = 200;
  int batch_size = 32;
  double l2 = 1e-4;
  uint64_t seed = 7;
};

// Multiclass linear softmax model. Rows follow `labels`, which are sorted
// and always contain `unknown`.
struct ClassifierParams {
  std::vector<std::string> labels;
  size_t dimension = 0;
  std::vector<double> weights;  // labels.size() x dimension, row-major.
  std::vector<double> bias;
  TrainConfig train_config;

  std::span<const double> row(size_t label) const {
    return {weights.data() + label * dimension, dimension};
  }
  // Index of `type_id` in labels, or -1.
  int LabelIndex(std::string_view type_id) const;
};

struct LossAndGradient {
  double loss = 0.0;
  std::vector<double> grad_weights;
  std::vector<double> grad_bias;
};

// Weighted mean cross-entropy plus (l2 / 2) * ||W||^2 (bias unregularized),
// with its analytic gradient.
absl::StatusOr<LossAndGradient> ComputeLossAndGradient(
    const ClassifierParams& params, std::span<const LabeledExample> examples,
    double l2);

struct TrainResult {
  ClassifierParams params;
  std::vector<double> epoch_losses;  // Full-data loss after each epoch.
};

// Seeded mini-batch gradient descent from zero weights. Deterministic for a
// given (examples, labels, config) and kernel ISA.
absl::StatusOr<TrainResult> TrainWithHistory(
    std::span<const LabeledExample> examples, std::vector<std::string> labels,
    const TrainConfig& config);
absl::StatusOr<ClassifierParams> Train(std::span<const LabeledExample> examples,
                                       std::vector<std::string> labels,
                                       const TrainConfig& config);

// Softmax probabilities in label order (numerically stabilized).
absl::StatusOr<std::vector<double>> PredictProbabilities(
    const FeatureVector& features, const ClassifierParams& params);
// The same probabilities as a classifier-stage prediction (all labels,
// `unknown` included).
absl::StatusOr<StagePrediction> Predict(const FeatureVector& features,
                                        const ClassifierParams& params);

// `count` examples labeled `unknown`: first columns whose annotation is not
// an ontology type (in seeded order, at most half of `count`), the rest
// chimera columns mixing the values of three distinct source columns.
absl::StatusOr<std::vector<LabeledExample>> MakeBackgroundExamples(
    std::span<const AnnotatedTable> corpus, const Ontology& ontology,
    size_t count, uint64_t seed, const EmbeddingStore& store);

// Builds the chimera column used by MakeBackgroundExamples; exposed for
// tests. Each row takes a value from a randomly chosen source.
Column MakeChimeraColumn(const std::vector<const Column*>& sources,
                         size_t rows, uint64_t seed);

}  // namespace coltype

#endif  // COLTYPE_CLASSIFIER_H_
