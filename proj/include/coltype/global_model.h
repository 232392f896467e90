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

#ifndef COLTYPE_GLOBAL_MODEL_H_
#define COLTYPE_GLOBAL_MODEL_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "coltype/classifier.h"
#include "coltype/model.h"

namespace coltype {

// Loads <dir>/{ontology.tsv, embeddings.txt} (required) and rules/,
// params.snap, corpus/, config.txt (optional). Built-in regex rules are
// registered for the types the ontology defines. `config_overrides` are
// "key=value" strings applied after config.txt. With `load_params` unset
// params.snap is ignored (used when retraining it).
absl::StatusOr<GlobalModel> LoadGlobalModel(
    const std::filesystem::path& dir,
    const std::vector<std::string>& config_overrides = {},
    bool load_params = true);

// Seed-corpus examples (every corpus column annotated with an ontology type)
// plus `background_count` background examples labeled `unknown`.
absl::StatusOr<std::vector<LabeledExample>> BuildGlobalTrainingSet(
    const GlobalModel& global, size_t background_count, uint64_t seed);

// Labels for the global classifier: every ontology type.
std::vector<std::string> GlobalLabels(const Ontology& ontology);

}  // namespace coltype

#endif  // COLTYPE_GLOBAL_MODEL_H_
