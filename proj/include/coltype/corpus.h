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

#ifndef COLTYPE_CORPUS_H_
#define COLTYPE_CORPUS_H_

#include <filesystem>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "coltype/table.h"

namespace coltype {

// Labels sidecar: "column_index<TAB>type_id" per line, '#' comments.
absl::StatusOr<std::vector<std::string>> ParseLabels(std::string_view content,
                                                     size_t num_columns);

// A directory of CSV files, each optionally paired with
// "<name>.labels.tsv". Tables are ordered by file name and take the file stem
// as their id; unlabeled columns carry "".
absl::StatusOr<std::vector<AnnotatedTable>> LoadLabeledCorpus(
    const std::filesystem::path& dir, const CsvOptions& options = {});

absl::StatusOr<std::string> ReadFile(const std::filesystem::path& path);
// Writes via a temporary file and rename, fsyncing the data first.
absl::Status WriteFileAtomic(const std::filesystem::path& path,
                             std::string_view content);

}  // namespace coltype

#endif  // COLTYPE_CORPUS_H_
