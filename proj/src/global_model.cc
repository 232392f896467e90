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

#include "coltype/global_model.h"

#include <algorithm>

#include "coltype/config.h"
#include "coltype/corpus.h"
#include "coltype/serialization.h"
#include "coltype/text.h"
#include "fmt/format.h"

namespace coltype {

namespace fs = std::filesystem;

namespace {

// Reads an optional file; absent files yield nullopt.
absl::StatusOr<std::optional<std::string>> ReadOptional(const fs::path& path) {
  std::error_code ec;
  if (!fs::exists(path, ec)) return std::optional<std::string>();
  absl::StatusOr<std::string> content = ReadFile(path);
  if (!content.ok()) return content.status();
  return std::optional<std::string>(*std::move(content));
}

absl::Status Prefixed(std::string_view file, const absl::Status& status) {
  return absl::Status(status.code(),
                      StrCat(file, ": ", std::string(status.message())));
}

class Fingerprint {
 public:
  void Add(std::string_view name, std::string_view content) {
    text_ += StrCat(name, "\n", content.size(), "\n");
    text_.append(content);
  }
  std::string Finish() const { return fmt::format("{:016x}", Fnv1a64(text_)); }

 private:
  std::string text_;
};

absl::Status LoadRules(const fs::path& dir, GlobalModel& model,
                       Fingerprint& fingerprint) {
  absl::StatusOr<std::vector<LookupRule>> builtin =
      ParseRegexPack(BuiltinRegexPack(), RuleOrigin::kBuiltin);
  if (!builtin.ok()) return builtin.status();
  for (LookupRule& rule : *builtin) {
    if (!model.ontology.Contains(rule.type_id)) continue;
    absl::StatusOr<std::string> id =
        model.rules.Register(std::move(rule), model.ontology);
    if (!id.ok()) return id.status();
  }
  const fs::path rules_dir = dir / "rules";
  std::error_code ec;
  if (!fs::is_directory(rules_dir, ec)) return absl::OkStatus();
  std::vector<fs::path> files;
  for (const fs::directory_entry& entry : fs::directory_iterator(rules_dir)) {
    if (entry.is_regular_file()) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const fs::path& file : files) {
    const std::string name = StrCat("rules/", file.filename().string());
    if (file.extension() == ".tsv") {
      absl::StatusOr<std::string> content = ReadFile(file);
      if (!content.ok()) return content.status();
      fingerprint.Add(name, *content);
      absl::StatusOr<std::vector<LookupRule>> rules =
          ParseRegexPack(*content, RuleOrigin::kKb);
      if (!rules.ok()) return Prefixed(name, rules.status());
      for (LookupRule& rule : *rules) {
        absl::StatusOr<std::string> id =
            model.rules.Register(std::move(rule), model.ontology);
        if (!id.ok()) return Prefixed(name, id.status());
      }
    } else if (file.extension() == ".dict") {
      absl::StatusOr<std::string> content = ReadFile(file);
      if (!content.ok()) return content.status();
      fingerprint.Add(name, *content);
      const std::string type_id = file.stem().string();
      absl::StatusOr<LookupRule> rule =
          MakeDictionaryRule(StrCat("dict:", type_id), type_id,
                             ParseDictionary(*content), true, RuleOrigin::kKb);
      if (!rule.ok()) return Prefixed(name, rule.status());
      absl::StatusOr<std::string> id =
          model.rules.Register(*std::move(rule), model.ontology);
      if (!id.ok()) return Prefixed(name, id.status());
    }
  }
  return absl::OkStatus();
}

}  // namespace

std::vector<std::string> GlobalLabels(const Ontology& ontology) {
  return ontology.TypeIds();
}

absl::StatusOr<GlobalModel> LoadGlobalModel(
    const fs::path& dir, const std::vector<std::string>& config_overrides,
    bool load_params) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    return absl::NotFoundError(StrCat("no global model at ", dir.string()));
  }
  GlobalModel model;
  Fingerprint fingerprint;

  absl::StatusOr<std::string> ontology_text = ReadFile(dir / "ontology.tsv");
  if (!ontology_text.ok()) return ontology_text.status();
  fingerprint.Add("ontology.tsv", *ontology_text);
  absl::StatusOr<Ontology> ontology = LoadOntology(*ontology_text);
  if (!ontology.ok()) return Prefixed("ontology.tsv", ontology.status());
  model.ontology = *std::move(ontology);

  absl::StatusOr<std::string> embeddings_text =
      ReadFile(dir / "embeddings.txt");
  if (!embeddings_text.ok()) return embeddings_text.status();
  fingerprint.Add("embeddings.txt", *embeddings_text);
  absl::StatusOr<EmbeddingStore> embeddings = LoadEmbeddings(*embeddings_text);
  if (!embeddings.ok()) {
    return Prefixed("embeddings.txt", embeddings.status());
  }
  model.embeddings = *std::move(embeddings);

  if (absl::Status status = LoadRules(dir, model, fingerprint); !status.ok()) {
    return status;
  }

  absl::StatusOr<std::optional<std::string>> config_text =
      ReadOptional(dir / "config.txt");
  if (!config_text.ok()) return config_text.status();
  if (*config_text) {
    // Not fingerprinted: tuning knobs do not invalidate tenant state.
    absl::Status status = ApplyConfigFile(model.config, **config_text);
    if (!status.ok()) return Prefixed("config.txt", status);
  }
  for (const std::string& assignment : config_overrides) {
    absl::Status status = ApplyConfigOverride(model.config, assignment);
    if (!status.ok()) return status;
  }

  // Knobs that shape tenant state do invalidate snapshots.
  const PipelineConfig& c = model.config;
  fingerprint.Add("adaptation",
                  fmt::format("{} {} {} {} {} {}", c.prior_strength,
                              c.lf_alpha, c.min_votes, c.weak_weight,
                              c.generation_cap, c.approval_retrain_every));

  if (fs::is_directory(dir / "corpus", ec)) {
    absl::StatusOr<std::vector<AnnotatedTable>> corpus =
        LoadLabeledCorpus(dir / "corpus");
    if (!corpus.ok()) return Prefixed("corpus", corpus.status());
    model.corpus = *std::move(corpus);
    std::vector<fs::path> files;
    for (const fs::directory_entry& entry :
         fs::directory_iterator(dir / "corpus")) {
      if (entry.is_regular_file()) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const fs::path& file : files) {
      absl::StatusOr<std::string> content = ReadFile(file);
      if (!content.ok()) return content.status();
      fingerprint.Add(StrCat("corpus/", file.filename().string()), *content);
    }
  }

  absl::StatusOr<std::optional<std::string>> params_text =
      load_params ? ReadOptional(dir / "params.snap")
                  : absl::StatusOr<std::optional<std::string>>(std::nullopt);
  if (!params_text.ok()) return params_text.status();
  if (*params_text) {
    fingerprint.Add("params.snap", **params_text);
    absl::StatusOr<GlobalParamsFile> params = ParseGlobalParams(**params_text);
    if (!params.ok()) return Prefixed("params.snap", params.status());
    const size_t expected =
        kNumProfileFeatures + model.embeddings.dimension();
    if (params->params.dimension != expected) {
      return absl::DataLossError(
          StrCat("params.snap: classifier expects ", params->params.dimension,
                 " features, embeddings give ", expected));
    }
    for (const std::string& label : params->params.labels) {
      if (!model.ontology.Contains(label)) {
        return absl::DataLossError(StrCat("params.snap: label '", label,
                                          "' is not in the ontology"));
      }
    }
    model.params = std::move(params->params);
    model.training_examples = std::move(params->training_examples);
  }
  model.fingerprint = fingerprint.Finish();
  return model;
}

absl::StatusOr<std::vector<LabeledExample>> BuildGlobalTrainingSet(
    const GlobalModel& global, size_t background_count, uint64_t seed) {
  std::vector<LabeledExample> examples;
  for (const AnnotatedTable& table : global.corpus) {
    for (size_t c = 0; c < table.table.columns.size(); ++c) {
      const std::string_view label = table.annotation(c);
      if (label.empty() || label == kUnknownTypeId ||
          !global.ontology.Contains(label)) {
        continue;
      }
      const Column& column = table.table.columns[c];
      LabeledExample example;
      example.features =
          ExtractFeatures(column, ProfileColumn(column), global.embeddings);
      example.type_id = std::string(label);
      example.origin = ExampleOrigin::kSeedCorpus;
      example.source = StrCat("corpus:", table.table.table_id, "#", c);
      examples.push_back(std::move(example));
    }
  }
  if (examples.empty()) {
    return absl::FailedPreconditionError(
        "the corpus has no columns annotated with ontology types");
  }
  absl::StatusOr<std::vector<LabeledExample>> background =
      MakeBackgroundExamples(global.corpus, global.ontology, background_count,
                             seed, global.embeddings);
  if (!background.ok()) return background.status();
  examples.insert(examples.end(), background->begin(), background->end());
  return examples;
}

}  // namespace coltype
