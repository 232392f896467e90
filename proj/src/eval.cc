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

#include "coltype/eval.h"

#include "coltype/text.h"
#include "fmt/format.h"

namespace coltype {

std::string EffectiveTruth(std::string_view label, const Ontology& ontology) {
  return ontology.Contains(label) ? std::string(label)
                                  : std::string(kUnknownTypeId);
}

absl::StatusOr<std::vector<LabeledPrediction>> PredictCorpus(
    std::span<const AnnotatedTable> corpus, const PipelineModel& model,
    const PipelineConfig& config) {
  std::vector<LabeledPrediction> out;
  for (const AnnotatedTable& table : corpus) {
    absl::StatusOr<std::vector<FinalPrediction>> predictions =
        RunPipeline(table.table, model, config);
    if (!predictions.ok()) return predictions.status();
    for (size_t c = 0; c < predictions->size(); ++c) {
      if (table.annotation(c).empty()) continue;
      out.push_back({table.table.table_id,
                     EffectiveTruth(table.annotation(c), *model.ontology),
                     (*predictions)[c]});
    }
  }
  return out;
}

EvalReport Evaluate(std::span<const LabeledPrediction> predictions,
                    double tau, double stage_gate, int top_k) {
  EvalReport report;
  report.tau = tau;
  report.stage_gate = stage_gate;
  report.total = predictions.size();
  for (const LabeledPrediction& item : predictions) {
    const FinalPrediction p = ApplyThreshold(item.prediction, tau, top_k);
    ++report.per_type[item.truth].support;
    if (p.abstained) {
      ++report.confusion[{item.truth, kAbstainLabel}];
      continue;
    }
    const std::string& predicted = p.ranked.front().type_id;
    ++report.confusion[{item.truth, predicted}];
    ++report.predicted;
    TypeStats& stats = report.per_type[predicted];
    ++stats.predicted;
    if (predicted == item.truth) {
      ++report.correct;
      ++stats.correct;
    }
  }
  if (report.predicted > 0) {
    report.precision = static_cast<double>(report.correct) /
                       static_cast<double>(report.predicted);
  }
  if (report.total > 0) {
    report.coverage = static_cast<double>(report.predicted) /
                      static_cast<double>(report.total);
  }
  return report;
}

std::vector<EvalReport> SweepTau(
    std::span<const LabeledPrediction> predictions, double stage_gate,
    int top_k) {
  std::vector<EvalReport> curve;
  for (int k = 0; k <= 100; ++k) {
    curve.push_back(Evaluate(predictions, TauGridValue(k), stage_gate, top_k));
  }
  return curve;
}

std::vector<ScoredPrediction> ToScored(
    std::span<const LabeledPrediction> predictions) {
  std::vector<ScoredPrediction> scored;
  for (const LabeledPrediction& item : predictions) {
    scored.push_back({item.prediction.top_confidence,
                      !item.prediction.top_type.empty() &&
                          item.prediction.top_type == item.truth});
  }
  return scored;
}

Json EvalReportToJson(const EvalReport& report) {
  Json per_type = Json::object();
  for (const auto& [type, stats] : report.per_type) {
    const std::optional<double> precision = stats.precision();
    per_type[type] = {{"support", stats.support},
                      {"predicted", stats.predicted},
                      {"correct", stats.correct},
                      {"precision", precision ? Json(*precision) : Json()}};
  }
  Json confusion = Json::array();
  for (const auto& [key, count] : report.confusion) {
    confusion.push_back(
        {{"truth", key.first}, {"predicted", key.second}, {"count", count}});
  }
  return {{"total", report.total},
          {"predicted", report.predicted},
          {"correct", report.correct},
          {"precision", report.precision ? Json(*report.precision) : Json()},
          {"coverage", report.coverage},
          {"per_type", std::move(per_type)},
          {"confusion", std::move(confusion)},
          {"tau", report.tau},
          {"c", report.stage_gate}};
}

std::string EvalReportToText(const EvalReport& report) {
  auto percent = [](std::optional<double> v) {
    return v ? fmt::format("{:6.1f}%", 100.0 * *v) : std::string("     -");
  };
  std::string out = fmt::format(
      "tau {:.2f}  c {:.2f}  columns {}  predicted {}  correct {}\n"
      "precision {}  coverage {}\n\n",
      report.tau, report.stage_gate, report.total, report.predicted,
      report.correct, percent(report.precision), percent(report.coverage));
  out += fmt::format("{:<16} {:>8} {:>10} {:>8} {:>10}\n", "type", "support",
                     "predicted", "correct", "precision");
  for (const auto& [type, stats] : report.per_type) {
    out += fmt::format("{:<16} {:>8} {:>10} {:>8} {:>10}\n", type,
                       stats.support, stats.predicted, stats.correct,
                       percent(stats.precision()));
  }
  return out;
}

}  // namespace coltype
