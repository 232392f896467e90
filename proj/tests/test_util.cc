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

#include "test_util.h"

#include <stdlib.h>

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "cli.h"

namespace coltype::testing {

namespace fs = std::filesystem;

TempDir::TempDir() {
  std::string pattern = (fs::temp_directory_path() / "coltype-XXXXXX").string();
  if (::mkdtemp(pattern.data()) == nullptr) {
    throw std::runtime_error("mkdtemp failed");
  }
  path_ = pattern;
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

Column MakeColumn(std::string header, std::vector<std::string> values) {
  Column column;
  column.header = std::move(header);
  column.values = std::move(values);
  column.primitive = InferPrimitive(column);
  return column;
}

Table MakeTable(std::string table_id,
                std::vector<std::pair<std::string, std::vector<std::string>>>
                    columns) {
  Table table;
  table.table_id = std::move(table_id);
  for (auto& [header, values] : columns) {
    table.headers.push_back(header);
    table.columns.push_back(MakeColumn(header, std::move(values)));
  }
  return table;
}

void WriteText(const fs::path& path, std::string_view content) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << content;
}

std::string ReadText(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void WriteTrainedDemo(const fs::path& dir, uint64_t seed) {
  const std::string out = dir.string();
  const std::string seed_text = std::to_string(seed);
  const char* argv[] = {"coltype", "synth", "--out", out.c_str(), "--seed",
                        seed_text.c_str()};
  std::ostringstream stdout_sink, stderr_sink;
  if (RunCli(6, argv, stdout_sink, stderr_sink) != kExitOk) {
    throw std::runtime_error("synth failed: " + stderr_sink.str());
  }
}

CliRun RunTool(const std::vector<std::string>& args) {
  std::vector<const char*> argv = {"coltype"};
  for (const std::string& arg : args) argv.push_back(arg.c_str());
  std::ostringstream out, err;
  CliRun run;
  run.code = RunCli(static_cast<int>(argv.size()), argv.data(), out, err);
  run.out = out.str();
  run.err = err.str();
  return run;
}

Recount RecountEval(const fs::path& corpus_dir, const fs::path& ontology_tsv,
                    const std::string& predictions_jsonl) {
  std::set<std::string> ids = {"unknown"};
  std::istringstream ontology(ReadText(ontology_tsv));
  for (std::string line; std::getline(ontology, line);) {
    if (line.empty() || line[0] == '#' || line.rfind("version\t", 0) == 0) {
      continue;
    }
    ids.insert(line.substr(0, line.find('\t')));
  }
  Recount recount;
  std::istringstream lines(predictions_jsonl);
  for (std::string line; std::getline(lines, line);) {
    if (line.empty()) continue;
    const nlohmann::json table = nlohmann::json::parse(line);
    const std::string table_id = table["table_id"];
    std::istringstream labels(
        ReadText(corpus_dir / (table_id + ".labels.tsv")));
    for (std::string label_line; std::getline(labels, label_line);) {
      const size_t tab = label_line.find('\t');
      if (label_line.empty() || label_line[0] == '#' ||
          tab == std::string::npos) {
        continue;
      }
      const size_t column = std::stoul(label_line.substr(0, tab));
      std::string truth = label_line.substr(tab + 1);
      if (!ids.contains(truth)) truth = "unknown";
      const nlohmann::json& p = table["columns"][column];
      ++recount.total;
      if (p["abstained"].get<bool>()) continue;
      ++recount.predicted;
      if (p["ranked"][0]["type"] == truth) ++recount.correct;
    }
  }
  return recount;
}

}  // namespace coltype::testing
