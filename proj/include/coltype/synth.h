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

#ifndef COLTYPE_SYNTH_H_
#define COLTYPE_SYNTH_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "coltype/table.h"

// Synthetic tables, ontology and embeddings for demos and scenario tests.
namespace coltype::synth {

// Portable draws over mt19937_64 (the std distributions are not specified
// bit-for-bit across standard libraries).
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}
  uint64_t Next() { return engine_(); }
  // Uniform in [0, n).
  size_t Below(size_t n) { return static_cast<size_t>(Next() % n); }
  // Uniform in [lo, hi].
  int64_t Between(int64_t lo, int64_t hi) {
    return lo + static_cast<int64_t>(Below(static_cast<size_t>(hi - lo + 1)));
  }
  // Uniform in [0, 1).
  double Unit() { return static_cast<double>(Next() >> 11) * 0x1.0p-53; }
  double Real(double lo, double hi) { return lo + (hi - lo) * Unit(); }
  template <typename T>
  const T& Pick(std::span<const T> items) {
    return items[Below(items.size())];
  }

 private:
  std::mt19937_64 engine_;
};

// Column kinds the generator knows: the demo ontology types plus salary and
// the out-of-ontology kinds latitude, longitude, temperature, hex_hash and
// product_code.
std::vector<std::string> Kinds();
bool IsKnownKind(std::string_view kind);

// `n` values of one kind. One style (e.g. "$" prefixes, M/F vs Male/Female)
// is drawn per call; `missing_rate` of the cells are left empty.
std::vector<std::string> GenerateValues(std::string_view kind, size_t n,
                                        Rng& rng, double missing_rate = 0.03);
// One of the kind's surface header forms, in a random letter case style.
std::string PickHeader(std::string_view kind, Rng& rng);
std::span<const std::string_view> HeaderForms(std::string_view kind);

struct ColumnSpec {
  std::string kind;
  bool annotate = true;
  std::optional<std::string> header;  // Drawn with PickHeader when unset.
};

AnnotatedTable MakeTable(std::string table_id, std::span<const ColumnSpec> spec,
                         size_t rows, Rng& rng);

// Table layouts of the demo corpus. Salary columns are unannotated and sit
// right of a name column.
std::vector<std::vector<ColumnSpec>> DefaultTemplates();

// `n_tables` tables cycling through the templates, 40-80 rows each.
std::vector<AnnotatedTable> MakeCorpus(size_t n_tables, uint64_t seed,
                                       std::string_view id_prefix);

// Demo ontology file: 17 types plus `unknown`; salary is absent.
std::string OntologyFile();
// Subset ontology file holding only `types` (canonical names and synonyms
// as in OntologyFile; parents outside the subset are dropped).
std::string OntologyFile(std::span<const std::string> types);

inline constexpr size_t kEmbeddingDimension = 24;
// Clustered embeddings: topic centroids are orthonormal, each token is its
// centroid plus scaled noise, so related tokens have cosine about 0.8.
std::string EmbeddingsFile(uint64_t seed);

std::string ToCsv(const Table& table);
std::string LabelsFile(const AnnotatedTable& table);
absl::Status WriteLabeledCorpus(const std::filesystem::path& dir,
                                std::span<const AnnotatedTable> corpus);

// Writes a demo data directory: global/{ontology.tsv, embeddings.txt,
// rules/, corpus/, config.txt}, eval/ (labeled held-out tables) and
// samples/. The global classifier is not trained here.
absl::Status WriteDemoData(const std::filesystem::path& dir, uint64_t seed);

}  // namespace coltype::synth

#endif  // COLTYPE_SYNTH_H_
