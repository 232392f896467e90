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

#include "coltype/classifier.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "absl/status/status.h"
#include "coltype/kernels.h"
#include "coltype/text.h"
#include "coltype/value_lookup.h"

namespace coltype {

namespace {

double SignedLog(double x) {
  return x < 0 ? -std::log1p(-x) : std::log1p(x);
}

// Values whose tokens are embedded: distinct, ordered by hash so the choice
// does not depend on row order.
std::vector<std::string_view> EmbeddedValues(const Column& column) {
  std::set<std::string_view> distinct;
  for (const std::string& value : column.values) {
    if (!value.empty()) distinct.insert(value);
  }
  std::vector<std::pair<uint64_t, std::string_view>> keyed;
  keyed.reserve(distinct.size());
  for (std::string_view value : distinct) {
    keyed.emplace_back(Fnv1a64(value), value);
  }
  std::sort(keyed.begin(), keyed.end());
  std::vector<std::string_view> out;
  for (size_t i = 0; i < keyed.size() && i < kMaxEmbeddedValues; ++i) {
    out.push_back(keyed[i].second);
  }
  return out;
}

void Softmax(std::span<double> logits) {
  const double max = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (double& z : logits) {
    z = std::exp(z - max);
    sum += z;
  }
  for (double& z : logits) z /= sum;
}

void Logits(const ClassifierParams& params, std::span<const double> x,
            std::span<double> out) {
  for (size_t k = 0; k < params.labels.size(); ++k) {
    out[k] = kernels::Dot(params.row(k), x) + params.bias[k];
  }
}

absl::StatusOr<std::vector<int>> LabelIndices(
    const ClassifierParams& params, std::span<const LabeledExample> examples) {
  std::vector<int> indices;
  indices.reserve(examples.size());
  for (const LabeledExample& example : examples) {
    const int index = params.LabelIndex(example.type_id);
    if (index < 0) {
      return absl::InvalidArgumentError(StrCat(
          "example label '", example.type_id, "' is not in the label list"));
    }
    if (example.features.size() != params.dimension) {
      return absl::InvalidArgumentError(
          StrCat("example has ", example.features.size(),
                       " features, expected ", params.dimension));
    }
    if (!(example.weight > 0.0 && example.weight <= 1.0)) {
      return absl::InvalidArgumentError("example weight outside (0, 1]");
    }
    indices.push_back(index);
  }
  return indices;
}

// Accumulates the weighted cross-entropy gradient of `batch` into `grad_w`
// and `grad_b`, normalized by the batch weight. Returns the weighted loss
// sum (unnormalized).
double AccumulateGradient(const ClassifierParams& params,
                          std::span<const LabeledExample> examples,
                          std::span<const int> label_index,
                          std::span<const size_t> batch, double total_weight,
                          std::vector<double>& grad_w,
                          std::vector<double>& grad_b) {
  const size_t n_labels = params.labels.size();
  const size_t dim = params.dimension;
  std::vector<double> probs(n_labels);
  double loss = 0.0;
  for (size_t i : batch) {
    const LabeledExample& example = examples[i];
    Logits(params, example.features.values, probs);
    Softmax(probs);
    const int y = label_index[i];
    loss += example.weight * -std::log(std::max(probs[y], 1e-300));
    const double scale = example.weight / total_weight;
    for (size_t k = 0; k < n_labels; ++k) {
      const double coef = scale * (probs[k] - (static_cast<int>(k) == y));
      if (coef == 0.0) continue;
      kernels::Axpy(coef, example.features.values,
                    std::span<double>(grad_w.data() + k * dim, dim));
      grad_b[k] += coef;
    }
  }
  return loss;
}

double FullLoss(const ClassifierParams& params,
                std::span<const LabeledExample> examples,
                std::span<const int> label_index, double l2) {
  std::vector<double> probs(params.labels.size());
  double loss = 0.0;
  double total_weight = 0.0;
  for (size_t i = 0; i < examples.size(); ++i) {
    Logits(params, examples[i].features.values, probs);
    Softmax(probs);
    loss += examples[i].weight *
            -std::log(std::max(probs[label_index[i]], 1e-300));
    total_weight += examples[i].weight;
  }
  return loss / total_weight + 0.5 * l2 * kernels::SquaredNorm(params.weights);
}

}  // namespace

FeatureVector ExtractFeatures(const Column& column,
                              const ColumnProfile& profile,
                              const EmbeddingStore& store) {
  FeatureVector features;
  features.values.assign(kNumProfileFeatures + store.dimension(), 0.0);
  std::vector<double>& f = features.values;
  f[0] = std::log1p(static_cast<double>(profile.n_rows)) / 10.0;
  if (profile.n_rows > 0) {
    f[1] = static_cast<double>(profile.n_missing) /
           static_cast<double>(profile.n_rows);
  }
  f[2] = profile.unique_ratio();
  if (profile.text_stats.has_value()) {
    f[3] = std::log1p(profile.text_stats->mean_length) / 5.0;
    for (int k = 0; k < kNumCharClasses; ++k) {
      f[4 + k] = profile.text_stats->char_class_histogram[k];
    }
  }
  if (profile.numeric_stats.has_value()) {
    const NumericStats& stats = *profile.numeric_stats;
    f[9] = 1.0;
    f[10] = SignedLog(stats.min) / 5.0;
    f[11] = SignedLog(stats.max) / 5.0;
    f[12] = SignedLog(stats.mean) / 5.0;
    f[13] = std::log1p(stats.std) / 5.0;
    f[14] = stats.fraction_integer;
  }
  const size_t present = profile.n_present();
  if (present > 0) {
    const double n = static_cast<double>(present);
    if (!profile.top_values.empty()) {
      f[15] = static_cast<double>(profile.top_values.front().second) / n;
      double top_total = 0.0;
      for (const auto& [value, count] : profile.top_values) top_total += count;
      double entropy = 0.0;
      for (const auto& [value, count] : profile.top_values) {
        const double p = static_cast<double>(count) / top_total;
        entropy -= p * std::log(p);
      }
      f[16] = entropy / std::log(static_cast<double>(kMaxTopValues));
    }
    size_t booleans = 0;
    size_t dates = 0;
    size_t digit_start = 0;
    for (const std::string& value : column.values) {
      if (value.empty()) continue;
      if (LooksLikeBoolean(value)) ++booleans;
      if (LooksLikeDate(value)) ++dates;
      const std::string_view trimmed = TrimWhitespace(value);
      if (!trimmed.empty() && trimmed[0] >= '0' && trimmed[0] <= '9') {
        ++digit_start;
      }
    }
    f[17] = static_cast<double>(booleans) / n;
    f[18] = static_cast<double>(dates) / n;
    f[19] = static_cast<double>(digit_start) / n;
  }

  if (store.dimension() > 0) {
    std::span<double> embedding(f.data() + kNumProfileFeatures,
                                store.dimension());
    size_t known = 0;
    for (std::string_view value : EmbeddedValues(column)) {
      for (const std::string& token : Tokenize(value)) {
        if (const std::vector<double>* v = store.Find(token)) {
          kernels::Axpy(1.0, *v, embedding);
          ++known;
        }
      }
    }
    if (known > 0) kernels::Scale(1.0 / static_cast<double>(known), embedding);
  }
  return features;
}

std::string_view ExampleOriginName(ExampleOrigin origin) {
  switch (origin) {
    case ExampleOrigin::kSeedCorpus:
      return "seed-corpus";
    case ExampleOrigin::kFeedbackTable:
      return "feedback-table";
    case ExampleOrigin::kDpbdGenerated:
      return "dpbd-generated";
    case ExampleOrigin::kBackground:
      return "background";
  }
  return "seed-corpus";
}

std::optional<ExampleOrigin> ParseExampleOrigin(std::string_view name) {
  for (ExampleOrigin origin :
       {ExampleOrigin::kSeedCorpus, ExampleOrigin::kFeedbackTable,
        ExampleOrigin::kDpbdGenerated, ExampleOrigin::kBackground}) {
    if (ExampleOriginName(origin) == name) return origin;
  }
  return std::nullopt;
}

int ClassifierParams::LabelIndex(std::string_view type_id) const {
  auto it = std::lower_bound(labels.begin(), labels.end(), type_id);
  if (it == labels.end() || *it != type_id) return -1;
  return static_cast<int>(it - labels.begin());
}

absl::StatusOr<LossAndGradient> ComputeLossAndGradient(
    const ClassifierParams& params, std::span<const LabeledExample> examples,
    double l2) {
  if (examples.empty()) return absl::InvalidArgumentError("no examples");
  absl::StatusOr<std::vector<int>> label_index = LabelIndices(params, examples);
  if (!label_index.ok()) return label_index.status();
  LossAndGradient result;
  result.grad_weights.assign(params.weights.size(), 0.0);
  result.grad_bias.assign(params.bias.size(), 0.0);
  double total_weight = 0.0;
  for (const LabeledExample& example : examples) total_weight += example.weight;
  std::vector<size_t> all(examples.size());
  std::iota(all.begin(), all.end(), 0);
  const double loss_sum =
      AccumulateGradient(params, examples, *label_index, all, total_weight,
                         result.grad_weights, result.grad_bias);
  kernels::Axpy(l2, params.weights, result.grad_weights);
  result.loss = loss_sum / total_weight +
                0.5 * l2 * kernels::SquaredNorm(params.weights);
  return result;
}

absl::StatusOr<TrainResult> TrainWithHistory(
    std::span<const LabeledExample> examples, std::vector<std::string> labels,
    const TrainConfig& config) {
  if (examples.empty()) {
    return absl::InvalidArgumentError("cannot train on an empty example list");
  }
  if (config.epochs < 0 || config.batch_size < 1 ||
      !(config.learning_rate > 0.0) || config.l2 < 0.0) {
    return absl::InvalidArgumentError("invalid training configuration");
  }
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  if (!std::binary_search(labels.begin(), labels.end(), kUnknownTypeId)) {
    return absl::InvalidArgumentError("label list must contain 'unknown'");
  }

  TrainResult result;
  ClassifierParams& params = result.params;
  params.labels = std::move(labels);
  params.dimension = examples.front().features.size();
  params.weights.assign(params.labels.size() * params.dimension, 0.0);
  params.bias.assign(params.labels.size(), 0.0);
  params.train_config = config;

  absl::StatusOr<std::vector<int>> label_index = LabelIndices(params, examples);
  if (!label_index.ok()) return label_index.status();

  const size_t n = examples.size();
  const size_t dim = params.dimension;
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Lcg64 rng(config.seed);
  std::vector<double> grad_w(params.weights.size());
  std::vector<double> grad_b(params.bias.size());
  const size_t batch_size = static_cast<size_t>(config.batch_size);

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    for (size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.Below(i)]);
    for (size_t start = 0; start < n; start += batch_size) {
      const std::span<const size_t> batch(
          order.data() + start, std::min(batch_size, n - start));
      double batch_weight = 0.0;
      for (size_t i : batch) batch_weight += examples[i].weight;
      std::fill(grad_w.begin(), grad_w.end(), 0.0);
      std::fill(grad_b.begin(), grad_b.end(), 0.0);
      AccumulateGradient(params, examples, *label_index, batch, batch_weight,
                         grad_w, grad_b);
      kernels::Axpy(config.l2, params.weights, grad_w);
      kernels::Axpy(-config.learning_rate, grad_w, params.weights);
      kernels::Axpy(-config.learning_rate, grad_b, params.bias);
    }
    const double loss = FullLoss(params, examples, *label_index, config.l2);
    if (!std::isfinite(loss)) {
      return absl::InternalError(
          StrCat("training diverged at epoch ", epoch + 1));
    }
    result.epoch_losses.push_back(loss);
  }
  (void)dim;
  return result;
}

absl::StatusOr<ClassifierParams> Train(std::span<const LabeledExample> examples,
                                       std::vector<std::string> labels,
                                       const TrainConfig& config) {
  absl::StatusOr<TrainResult> result =
      TrainWithHistory(examples, std::move(labels), config);
  if (!result.ok()) return result.status();
  return std::move(result->params);
}

absl::StatusOr<std::vector<double>> PredictProbabilities(
    const FeatureVector& features, const ClassifierParams& params) {
  if (features.size() != params.dimension) {
    return absl::InvalidArgumentError(
        StrCat("feature vector has ", features.size(),
                     " components, classifier expects ", params.dimension));
  }
  if (params.labels.empty()) {
    return absl::FailedPreconditionError("classifier has no labels");
  }
  std::vector<double> probs(params.labels.size());
  Logits(params, features.values, probs);
  Softmax(probs);
  return probs;
}

absl::StatusOr<StagePrediction> Predict(const FeatureVector& features,
                                        const ClassifierParams& params) {
  absl::StatusOr<std::vector<double>> probs =
      PredictProbabilities(features, params);
  if (!probs.ok()) return probs.status();
  StagePrediction prediction{Stage::kClassifier, {}};
  for (size_t k = 0; k < params.labels.size(); ++k) {
    prediction.scores[params.labels[k]] = (*probs)[k];
  }
  return prediction;
}

Column MakeChimeraColumn(const std::vector<const Column*>& sources,
                         size_t rows, uint64_t seed) {
  Lcg64 rng(seed);
  std::vector<std::vector<const std::string*>> pools;
  for (const Column* source : sources) {
    std::vector<const std::string*> pool;
    for (const std::string& value : source->values) {
      if (!value.empty()) pool.push_back(&value);
    }
    if (!pool.empty()) pools.push_back(std::move(pool));
  }
  Column chimera;
  chimera.header = "";
  if (pools.empty()) return chimera;
  chimera.values.reserve(rows);
  for (size_t r = 0; r < rows; ++r) {
    const auto& pool = pools[rng.Below(pools.size())];
    chimera.values.push_back(*pool[rng.Below(pool.size())]);
  }
  chimera.primitive = InferPrimitive(chimera);
  return chimera;
}

absl::StatusOr<std::vector<LabeledExample>> MakeBackgroundExamples(
    std::span<const AnnotatedTable> corpus, const Ontology& ontology,
    size_t count, uint64_t seed, const EmbeddingStore& store) {
  if (count == 0) return std::vector<LabeledExample>{};
  std::vector<const Column*> usable;
  std::vector<const Column*> outside;
  for (const AnnotatedTable& annotated : corpus) {
    for (size_t c = 0; c < annotated.table.columns.size(); ++c) {
      const Column& column = annotated.table.columns[c];
      if (column.primitive == Primitive::kEmpty) continue;
      usable.push_back(&column);
      const std::string_view annotation = annotated.annotation(c);
      if (!annotation.empty() && !ontology.Contains(annotation)) {
        outside.push_back(&column);
      }
    }
  }
  if (usable.empty()) {
    return absl::InvalidArgumentError("corpus has no usable columns");
  }

  Lcg64 rng(seed);
  for (size_t i = outside.size(); i > 1; --i) {
    std::swap(outside[i - 1], outside[rng.Below(i)]);
  }
  const size_t from_outside = std::min(outside.size(), count / 2);
  if (count > from_outside && usable.size() < 3) {
    return absl::FailedPreconditionError(
        "chimera columns need at least three usable source columns");
  }

  auto make_example = [&](const Column& column) {
    LabeledExample example;
    example.features = ExtractFeatures(column, ProfileColumn(column), store);
    example.type_id = std::string(kUnknownTypeId);
    example.weight = 1.0;
    example.origin = ExampleOrigin::kBackground;
    return example;
  };

  std::vector<LabeledExample> examples;
  examples.reserve(count);
  for (size_t i = 0; i < from_outside; ++i) {
    examples.push_back(make_example(*outside[i]));
  }
  while (examples.size() < count) {
    std::vector<const Column*> sources;
    while (sources.size() < 3) {
      const Column* pick = usable[rng.Below(usable.size())];
      if (std::find(sources.begin(), sources.end(), pick) == sources.end()) {
        sources.push_back(pick);
      }
    }
    const size_t rows = std::max<size_t>(sources.front()->values.size(), 1);
    examples.push_back(make_example(MakeChimeraColumn(sources, rows, rng.Next())));
  }
  return examples;
}

}  // namespace coltype
