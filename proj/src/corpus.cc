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

#include "coltype/corpus.h"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>

#include "coltype/text.h"

namespace coltype {

namespace fs = std::filesystem;

absl::StatusOr<std::vector<std::string>> ParseLabels(std::string_view content,
                                                     size_t num_columns) {
  std::vector<std::string> labels(num_columns);
  int line_number = 0;
  for (std::string_view raw : Split(content, '\n')) {
    ++line_number;
    std::string_view line = TrimWhitespace(raw);
    if (line.empty() || line.front() == '#') continue;
    const std::vector<std::string_view> fields = Split(line, '\t');
    const auto index =
        fields.size() == 2 ? ParseInt<size_t>(TrimWhitespace(fields[0]))
                           : std::nullopt;
    if (!index) {
      return absl::InvalidArgumentError(StrCat(
          "labels line ", line_number, ": expected column_index<TAB>type_id"));
    }
    if (*index >= num_columns) {
      return absl::InvalidArgumentError(
          StrCat("labels line ", line_number, ": column ", *index,
                 " out of range (table has ", num_columns, ")"));
    }
    labels[*index] = std::string(TrimWhitespace(fields[1]));
  }
  return labels;
}

absl::StatusOr<std::string> ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return absl::NotFoundError(StrCat("cannot read ", path.string()));
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

absl::Status WriteFileAtomic(const fs::path& path, std::string_view content) {
  const fs::path tmp = path.string() + ".tmp";
  const int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
  if (fd < 0) {
    return absl::InternalError(
        StrCat("open ", tmp.string(), ": ", std::strerror(errno)));
  }
  size_t written = 0;
  while (written < content.size()) {
    const ssize_t n =
        ::write(fd, content.data() + written, content.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      ::close(fd);
      return absl::InternalError(
          StrCat("write ", tmp.string(), ": ", std::strerror(errno)));
    }
    written += static_cast<size_t>(n);
  }
  if (::fsync(fd) != 0 || ::close(fd) != 0) {
    return absl::InternalError(
        StrCat("sync ", tmp.string(), ": ", std::strerror(errno)));
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    return absl::InternalError(
        StrCat("rename ", tmp.string(), ": ", ec.message()));
  }
  return absl::OkStatus();
}

absl::StatusOr<std::vector<AnnotatedTable>> LoadLabeledCorpus(
    const fs::path& dir, const CsvOptions& options) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    return absl::NotFoundError(StrCat("no corpus directory ", dir.string()));
  }
  std::vector<fs::path> csvs;
  for (const fs::directory_entry& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".csv") {
      csvs.push_back(entry.path());
    }
  }
  std::sort(csvs.begin(), csvs.end());
  std::vector<AnnotatedTable> corpus;
  for (const fs::path& csv : csvs) {
    absl::StatusOr<std::string> bytes = ReadFile(csv);
    if (!bytes.ok()) return bytes.status();
    absl::StatusOr<Table> table = ParseCsv(*bytes, options);
    if (!table.ok()) {
      return absl::InvalidArgumentError(StrCat(
          csv.filename().string(), ": ", std::string(table.status().message())));
    }
    AnnotatedTable annotated;
    annotated.table = *std::move(table);
    annotated.table.table_id = csv.stem().string();
    annotated.table.name = csv.filename().string();
    annotated.annotations.assign(annotated.table.columns.size(), "");
    const fs::path labels_path =
        csv.parent_path() / (csv.stem().string() + ".labels.tsv");
    if (fs::exists(labels_path, ec)) {
      absl::StatusOr<std::string> content = ReadFile(labels_path);
      if (!content.ok()) return content.status();
      absl::StatusOr<std::vector<std::string>> labels =
          ParseLabels(*content, annotated.table.columns.size());
      if (!labels.ok()) {
        return absl::InvalidArgumentError(
            StrCat(labels_path.filename().string(), ": ",
                   std::string(labels.status().message())));
      }
      annotated.annotations = *std::move(labels);
    }
    corpus.push_back(std::move(annotated));
  }
  return corpus;
}

}  // namespace coltype
