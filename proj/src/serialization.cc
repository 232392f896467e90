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

#include "coltype/serialization.h"

#include <map>
#include <set>
#include <utility>

#include "coltype/text.h"

namespace coltype {
namespace {

constexpr int kFormatVersion = 1;

absl::Status JsonError(const std::exception& e, std::string_view what) {
  return absl::InvalidArgumentError(StrCat("malformed ", what, ": ", e.what()));
}

absl::Status CheckFormat(const Json& json, std::string_view format) {
  const auto field = [&json](const char* key) -> const Json* {
    if (!json.is_object()) return nullptr;
    auto it = json.find(key);
    return it == json.end() ? nullptr : &*it;
  };
  const Json* name = field("format");
  if (name == nullptr || !name->is_string() ||
      name->get<std::string>() != format) {
    return absl::InvalidArgumentError(
        StrCat("expected a '", format, "' document"));
  }
  const Json* version = field("version");
  if (version == nullptr || !version->is_number_integer() ||
      version->get<int64_t>() != kFormatVersion) {
    return absl::InvalidArgumentError(
        StrCat("unsupported ", format, " version ",
               version == nullptr ? std::string("(none)") : version->dump()));
  }
  return absl::OkStatus();
}

Json ScoresToJson(const std::map<std::string, double, std::less<>>& scores) {
  Json out = Json::object();
  for (const auto& [id, score] : scores) out[id] = score;
  return out;
}

}  // namespace

Json PredictionsToJson(std::string_view table_id, int64_t ontology_version,
                       int64_t revision,
                       const std::vector<FinalPrediction>& predictions) {
  Json columns = Json::array();
  for (const FinalPrediction& p : predictions) {
    Json ranked = Json::array();
    for (const RankedType& r : p.ranked) {
      ranked.push_back({{"type", r.type_id}, {"confidence", r.confidence}});
    }
    Json stages = Json::array();
    for (const StageTrace& trace : p.stages) {
      stages.push_back({{"stage", StageName(trace.stage)},
                        {"side", SideName(trace.side)},
                        {"scores", ScoresToJson(trace.scores)}});
    }
    columns.push_back({{"column_index", p.column_index},
                       {"header", p.header},
                       {"ranked", std::move(ranked)},
                       {"abstained", p.abstained},
                       {"stages", std::move(stages)}});
  }
  return {{"table_id", table_id},
          {"ontology_version", ontology_version},
          {"revision", revision},
          {"columns", std::move(columns)}};
}

std::string DumpJson(const Json& json) {
  return json.dump(-1, ' ', false, Json::error_handler_t::replace) + "\n";
}

Json OntologyToJson(const Ontology& ontology) {
  Json types = Json::array();
  for (const auto& [id, type] : ontology.types()) {
    types.push_back({{"id", id},
                     {"canonical_name", type.canonical_name},
                     {"synonyms", type.synonyms},
                     {"parent", type.parent_id ? Json(*type.parent_id)
                                               : Json(nullptr)},
                     {"source", TypeSourceName(type.source)}});
  }
  return {{"version", ontology.version()}, {"types", std::move(types)}};
}

Json LabelingFunctionToJson(const LabelingFunction& lf) {
  Json body = std::visit(
      [](const auto& b) -> Json {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, NumericRange>) {
          return {{"lo", b.lo}, {"hi", b.hi}};
        } else if constexpr (std::is_same_v<T, ValueSet>) {
          return {{"values", b.values},
                  {"min_overlap_fraction", b.min_overlap_fraction}};
        } else if constexpr (std::is_same_v<T, UniqueRatioBand>) {
          return {{"lo", b.lo}, {"hi", b.hi}};
        } else if constexpr (std::is_same_v<T, HeaderToken>) {
          return {{"tokens", b.tokens}};
        } else {
          return {{"neighbor_type", b.neighbor_type_id},
                  {"direction", DirectionName(b.direction)}};
        }
      },
      lf.body);
  body["kind"] = LfKindName(lf.body);
  return {{"lf_id", lf.lf_id},
          {"type_id", lf.type_id},
          {"body", std::move(body)},
          {"provenance", lf.provenance}};
}

absl::StatusOr<LabelingFunction> LabelingFunctionFromJson(const Json& json) {
  try {
    LabelingFunction lf;
    lf.lf_id = json.at("lf_id").get<std::string>();
    lf.type_id = json.at("type_id").get<std::string>();
    lf.provenance = json.at("provenance").get<std::string>();
    const Json& body = json.at("body");
    const std::string kind = body.at("kind").get<std::string>();
    if (kind == "numeric_range") {
      lf.body = NumericRange{body.at("lo").get<double>(),
                             body.at("hi").get<double>()};
    } else if (kind == "value_set") {
      lf.body = ValueSet{body.at("values").get<std::set<std::string>>(),
                         body.at("min_overlap_fraction").get<double>()};
    } else if (kind == "unique_ratio_band") {
      lf.body = UniqueRatioBand{body.at("lo").get<double>(),
                                body.at("hi").get<double>()};
    } else if (kind == "header_token") {
      lf.body = HeaderToken{body.at("tokens").get<std::set<std::string>>()};
    } else if (kind == "co_occurrence") {
      const auto direction =
          ParseDirection(body.at("direction").get<std::string>());
      if (!direction) return absl::InvalidArgumentError("bad LF direction");
      lf.body = CoOccurrence{body.at("neighbor_type").get<std::string>(),
                             *direction};
    } else {
      return absl::InvalidArgumentError(StrCat("unknown LF kind '", kind, "'"));
    }
    return lf;
  } catch (const Json::exception& e) {
    return JsonError(e, "labeling function");
  }
}

Json LookupRuleToJson(const LookupRule& rule) {
  Json out = {{"rule_id", rule.rule_id},
              {"type_id", rule.type_id},
              {"origin", RuleOriginName(rule.origin)}};
  if (const auto* regex = std::get_if<RegexBody>(&rule.body)) {
    out["kind"] = "regex";
    out["pattern"] = regex->pattern;
  } else if (const auto* dict = std::get_if<DictionaryBody>(&rule.body)) {
    out["kind"] = "dictionary";
    out["values"] = dict->values;
    out["case_fold"] = dict->case_fold;
  } else {
    out["kind"] = "lf";
    out["lf_id"] = std::get<LfRefBody>(rule.body).lf_id;
  }
  return out;
}

absl::StatusOr<LookupRule> LookupRuleFromJson(const Json& json) {
  try {
    const auto origin = ParseRuleOrigin(json.at("origin").get<std::string>());
    if (!origin) return absl::InvalidArgumentError("bad rule origin");
    const std::string kind = json.at("kind").get<std::string>();
    std::string rule_id = json.at("rule_id").get<std::string>();
    std::string type_id = json.at("type_id").get<std::string>();
    if (kind == "regex") {
      return MakeRegexRule(std::move(rule_id), std::move(type_id),
                           json.at("pattern").get<std::string>(), *origin);
    }
    if (kind == "dictionary") {
      return MakeDictionaryRule(
          std::move(rule_id), std::move(type_id),
          json.at("values").get<std::vector<std::string>>(),
          json.at("case_fold").get<bool>(), *origin);
    }
    if (kind == "lf") {
      LookupRule rule;
      rule.rule_id = std::move(rule_id);
      rule.type_id = std::move(type_id);
      rule.origin = *origin;
      rule.body = LfRefBody{json.at("lf_id").get<std::string>()};
      return rule;
    }
    return absl::InvalidArgumentError(StrCat("unknown rule kind '", kind, "'"));
  } catch (const Json::exception& e) {
    return JsonError(e, "lookup rule");
  }
}

Json FeedbackEventToJson(const FeedbackEvent& event) {
  return {{"event_id", event.event_id},
          {"tenant_id", event.tenant_id},
          {"table_id", event.table_id},
          {"column_index", event.column_index},
          {"predicted_type", event.predicted_type},
          {"asserted_type", event.asserted_type},
          {"kind", FeedbackKindName(event.kind)},
          {"timestamp", event.timestamp}};
}

absl::StatusOr<FeedbackEvent> FeedbackEventFromJson(const Json& json) {
  try {
    if (!json.is_object()) {
      return absl::InvalidArgumentError("feedback event must be an object");
    }
    FeedbackEvent event;
    event.event_id = json.at("event_id").get<std::string>();
    event.tenant_id = json.value("tenant_id", "");
    event.table_id = json.at("table_id").get<std::string>();
    const Json& column = json.at("column_index");
    if (!column.is_number_integer() || column.get<int64_t>() < 0) {
      return absl::InvalidArgumentError(
          "column_index must be a non-negative integer");
    }
    event.column_index = column.get<size_t>();
    event.predicted_type = json.value("predicted_type", "");
    event.asserted_type = json.value("asserted_type", "");
    const auto kind = ParseFeedbackKind(json.at("kind").get<std::string>());
    if (!kind) {
      return absl::InvalidArgumentError(
          StrCat("unknown feedback kind '", json.at("kind").dump(), "'"));
    }
    event.kind = *kind;
    event.timestamp = json.value("timestamp", "");
    if (IsApproval(event.kind) && event.asserted_type.empty()) {
      event.asserted_type = event.predicted_type;
    }
    return event;
  } catch (const Json::exception& e) {
    return JsonError(e, "feedback event");
  }
}

Json AdaptationReportToJson(const AdaptationReport& report) {
  Json lfs = Json::array();
  for (const LabelingFunction& lf : report.new_lfs) {
    lfs.push_back(LabelingFunctionToJson(lf));
  }
  return {{"event_id", report.event_id},
          {"kind", FeedbackKindName(report.kind)},
          {"type_id", report.type_id},
          {"created_type", report.created_type},
          {"new_lfs", std::move(lfs)},
          {"n_generated", report.n_generated},
          {"n_table_examples", report.n_table_examples},
          {"retrained", report.retrained},
          {"weight_updates", ScoresToJson(report.weight_updates)}};
}

absl::StatusOr<AdaptationReport> AdaptationReportFromJson(const Json& json) {
  try {
    AdaptationReport report;
    report.event_id = json.at("event_id").get<std::string>();
    const auto kind = ParseFeedbackKind(json.at("kind").get<std::string>());
    if (!kind) return absl::InvalidArgumentError("bad report kind");
    report.kind = *kind;
    report.type_id = json.at("type_id").get<std::string>();
    report.created_type = json.at("created_type").get<bool>();
    for (const Json& lf : json.at("new_lfs")) {
      absl::StatusOr<LabelingFunction> parsed = LabelingFunctionFromJson(lf);
      if (!parsed.ok()) return parsed.status();
      report.new_lfs.push_back(*std::move(parsed));
    }
    report.n_generated = json.at("n_generated").get<size_t>();
    report.n_table_examples = json.at("n_table_examples").get<size_t>();
    report.retrained = json.at("retrained").get<bool>();
    for (const auto& [id, w] : json.at("weight_updates").items()) {
      report.weight_updates[id] = w.get<double>();
    }
    return report;
  } catch (const Json::exception& e) {
    return JsonError(e, "adaptation report");
  }
}

Json LabeledExampleToJson(const LabeledExample& example) {
  return {{"features", example.features.values},
          {"type_id", example.type_id},
          {"weight", example.weight},
          {"origin", ExampleOriginName(example.origin)},
          {"source", example.source}};
}

absl::StatusOr<LabeledExample> LabeledExampleFromJson(const Json& json) {
  try {
    LabeledExample example;
    example.features.values = json.at("features").get<std::vector<double>>();
    example.type_id = json.at("type_id").get<std::string>();
    example.weight = json.at("weight").get<double>();
    const auto origin =
        ParseExampleOrigin(json.at("origin").get<std::string>());
    if (!origin) return absl::InvalidArgumentError("bad example origin");
    example.origin = *origin;
    example.source = json.at("source").get<std::string>();
    return example;
  } catch (const Json::exception& e) {
    return JsonError(e, "labeled example");
  }
}

Json ClassifierParamsToJson(const ClassifierParams& params) {
  const TrainConfig& c = params.train_config;
  return {{"labels", params.labels},
          {"dimension", params.dimension},
          {"weights", params.weights},
          {"bias", params.bias},
          {"train_config",
           {{"learning_rate", c.learning_rate},
            {"epochs", c.epochs},
            {"batch_size", c.batch_size},
            {"l2", c.l2},
            {"seed", c.seed}}}};
}

absl::StatusOr<ClassifierParams> ClassifierParamsFromJson(const Json& json) {
  try {
    ClassifierParams params;
    params.labels = json.at("labels").get<std::vector<std::string>>();
    params.dimension = json.at("dimension").get<size_t>();
    params.weights = json.at("weights").get<std::vector<double>>();
    params.bias = json.at("bias").get<std::vector<double>>();
    const Json& c = json.at("train_config");
    params.train_config.learning_rate = c.at("learning_rate").get<double>();
    params.train_config.epochs = c.at("epochs").get<int>();
    params.train_config.batch_size = c.at("batch_size").get<int>();
    params.train_config.l2 = c.at("l2").get<double>();
    params.train_config.seed = c.at("seed").get<uint64_t>();
    if (params.weights.size() != params.labels.size() * params.dimension ||
        params.bias.size() != params.labels.size()) {
      return absl::DataLossError("classifier params have inconsistent shape");
    }
    return params;
  } catch (const Json::exception& e) {
    return JsonError(e, "classifier params");
  }
}

Json ModelWeightsToJson(const ModelWeights& weights) {
  Json counts = Json::object();
  for (const auto& [id, n] : weights.feedback_counts) counts[id] = n;
  return {{"prior_strength", weights.prior_strength},
          {"feedback_counts", std::move(counts)},
          {"local_only_types", weights.local_only_types}};
}

absl::StatusOr<ModelWeights> ModelWeightsFromJson(const Json& json) {
  try {
    ModelWeights weights;
    weights.prior_strength = json.at("prior_strength").get<double>();
    for (const auto& [id, n] : json.at("feedback_counts").items()) {
      weights.feedback_counts[id] = n.get<int64_t>();
    }
    for (const Json& id : json.at("local_only_types")) {
      weights.local_only_types.insert(id.get<std::string>());
    }
    return weights;
  } catch (const Json::exception& e) {
    return JsonError(e, "model weights");
  }
}

std::string SerializeGlobalParams(
    const ClassifierParams& params,
    const std::vector<LabeledExample>& training_examples) {
  Json examples = Json::array();
  for (const LabeledExample& example : training_examples) {
    examples.push_back(LabeledExampleToJson(example));
  }
  return DumpJson({{"format", "coltype.params"},
                   {"version", kFormatVersion},
                   {"params", ClassifierParamsToJson(params)},
                   {"training_examples", std::move(examples)}});
}

absl::StatusOr<GlobalParamsFile> ParseGlobalParams(std::string_view content) {
  Json json = Json::parse(content, nullptr, /*allow_exceptions=*/false);
  if (json.is_discarded()) {
    return absl::InvalidArgumentError("params file is not valid JSON");
  }
  if (absl::Status s = CheckFormat(json, "coltype.params"); !s.ok()) return s;
  GlobalParamsFile file;
  try {
    absl::StatusOr<ClassifierParams> params =
        ClassifierParamsFromJson(json.at("params"));
    if (!params.ok()) return params.status();
    file.params = *std::move(params);
    for (const Json& e : json.at("training_examples")) {
      absl::StatusOr<LabeledExample> example = LabeledExampleFromJson(e);
      if (!example.ok()) return example.status();
      file.training_examples.push_back(*std::move(example));
    }
  } catch (const Json::exception& e) {
    return JsonError(e, "params file");
  }
  return file;
}

std::string SerializeTenant(const TenantModel& tenant,
                            std::string_view fingerprint) {
  Json lfs = Json::array();
  for (const auto& [id, lf] : tenant.lfs) lfs.push_back(LabelingFunctionToJson(lf));
  Json rules = Json::array();
  for (const LookupRule& rule : tenant.rules.rules()) {
    rules.push_back(LookupRuleToJson(rule));
  }
  Json examples = Json::array();
  for (const LabeledExample& e : tenant.examples) {
    examples.push_back(LabeledExampleToJson(e));
  }
  Json labels = Json::object();
  for (const auto& [table_id, columns] : tenant.table_labels) {
    Json cols = Json::object();
    for (const auto& [c, type] : columns) cols[std::to_string(c)] = type;
    labels[table_id] = std::move(cols);
  }
  Json reports = Json::array();
  for (const auto& [id, report] : tenant.reports) {
    reports.push_back(AdaptationReportToJson(report));
  }
  return DumpJson(
      {{"format", "coltype.tenant"},
       {"version", kFormatVersion},
       {"tenant_id", tenant.tenant_id},
       {"global_fingerprint", fingerprint},
       {"events_applied", tenant.events_applied},
       {"user_type_names", tenant.user_type_names},
       {"lfs", std::move(lfs)},
       {"rules", std::move(rules)},
       {"weights", ModelWeightsToJson(tenant.weights)},
       {"params", tenant.params ? ClassifierParamsToJson(*tenant.params)
                                : Json(nullptr)},
       {"examples", std::move(examples)},
       {"table_labels", std::move(labels)},
       {"reports", std::move(reports)},
       {"pending_approval_examples", tenant.pending_approval_examples}});
}

absl::StatusOr<TenantSnapshot> ParseTenant(std::string_view content,
                                           const GlobalModel& global) {
  Json json = Json::parse(content, nullptr, /*allow_exceptions=*/false);
  if (json.is_discarded()) {
    return absl::InvalidArgumentError("tenant snapshot is not valid JSON");
  }
  if (absl::Status s = CheckFormat(json, "coltype.tenant"); !s.ok()) return s;
  try {
    TenantSnapshot snapshot;
    snapshot.fingerprint = json.at("global_fingerprint").get<std::string>();
    TenantModel tenant =
        NewTenant(global, json.at("tenant_id").get<std::string>());
    tenant.events_applied = json.at("events_applied").get<int64_t>();
    for (const Json& name : json.at("user_type_names")) {
      absl::StatusOr<SemanticType> added =
          tenant.ontology.AddUserType(name.get<std::string>());
      if (!added.ok()) return added.status();
      tenant.user_type_names.push_back(name.get<std::string>());
    }
    for (const Json& lf_json : json.at("lfs")) {
      absl::StatusOr<LabelingFunction> lf = LabelingFunctionFromJson(lf_json);
      if (!lf.ok()) return lf.status();
      tenant.lfs[lf->lf_id] = *std::move(lf);
    }
    for (const Json& rule_json : json.at("rules")) {
      absl::StatusOr<LookupRule> rule = LookupRuleFromJson(rule_json);
      if (!rule.ok()) return rule.status();
      absl::StatusOr<std::string> id =
          tenant.rules.Register(*std::move(rule), tenant.ontology);
      if (!id.ok()) return id.status();
    }
    absl::StatusOr<ModelWeights> weights =
        ModelWeightsFromJson(json.at("weights"));
    if (!weights.ok()) return weights.status();
    tenant.weights = *std::move(weights);
    if (!json.at("params").is_null()) {
      absl::StatusOr<ClassifierParams> params =
          ClassifierParamsFromJson(json.at("params"));
      if (!params.ok()) return params.status();
      tenant.params = *std::move(params);
    }
    for (const Json& e : json.at("examples")) {
      absl::StatusOr<LabeledExample> example = LabeledExampleFromJson(e);
      if (!example.ok()) return example.status();
      tenant.examples.push_back(*std::move(example));
    }
    for (const auto& [table_id, cols] : json.at("table_labels").items()) {
      for (const auto& [c, type] : cols.items()) {
        const auto index = ParseInt<size_t>(c);
        if (!index) return absl::InvalidArgumentError("bad column key");
        tenant.table_labels[table_id][*index] = type.get<std::string>();
      }
    }
    for (const Json& r : json.at("reports")) {
      absl::StatusOr<AdaptationReport> report = AdaptationReportFromJson(r);
      if (!report.ok()) return report.status();
      tenant.reports[report->event_id] = *std::move(report);
    }
    tenant.pending_approval_examples =
        json.at("pending_approval_examples").get<size_t>();
    snapshot.tenant = std::move(tenant);
    return snapshot;
  } catch (const Json::exception& e) {
    return JsonError(e, "tenant snapshot");
  }
}

Json TenantStateToJson(const GlobalModel& global, const TenantModel& tenant) {
  Json weights = Json::object();
  for (const std::string& id : tenant.ontology.TypeIds()) {
    weights[id] = {{"n", tenant.weights.Count(id)},
                   {"w_local", tenant.weights.Local(id)},
                   {"w_global", tenant.weights.Global(id)}};
  }
  Json lfs = Json::array();
  for (const auto& [id, lf] : tenant.lfs) lfs.push_back(LabelingFunctionToJson(lf));
  std::map<std::string, size_t> by_origin;
  for (const LabeledExample& e : tenant.examples) {
    ++by_origin[std::string(ExampleOriginName(e.origin))];
  }
  return {{"tenant_id", tenant.tenant_id},
          {"revision", tenant.revision()},
          {"ontology_version", tenant.ontology.version()},
          {"user_types", tenant.UserTypeIds()},
          {"prior_strength", tenant.weights.prior_strength},
          {"weights", std::move(weights)},
          {"lfs", std::move(lfs)},
          {"local_rules", tenant.rules.size()},
          {"example_counts", by_origin},
          {"n_examples", tenant.examples.size()},
          {"local_classifier", tenant.params.has_value()},
          {"tau", global.config.abstain_threshold},
          {"c", global.config.stage_gate}};
}

}  // namespace coltype
