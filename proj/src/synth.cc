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

#include "coltype/synth.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <set>

#include "coltype/corpus.h"
#include "coltype/text.h"
#include "fmt/format.h"

namespace coltype::synth {

namespace fs = std::filesystem;

namespace {

using Words = std::vector<std::string_view>;

const Words kFirstNames = {
    "James",  "Mary",   "Robert", "Patricia", "John",   "Jennifer", "Michael",
    "Linda",  "David",  "Susan",  "William",  "Karen",  "Richard",  "Nancy",
    "Joseph", "Lisa",   "Thomas", "Sandra",   "Carlos", "Maria",    "Ahmed",
    "Fatima", "Wei",    "Mei",    "Ivan",     "Olga",   "Kenji",    "Yuki",
    "Pierre", "Amelie", "Lukas",  "Anna"};
const Words kLastNames = {
    "Smith",  "Johnson", "Williams", "Brown",  "Jones",    "Garcia",
    "Miller", "Davis",   "Martinez", "Lopez",  "Wilson",   "Anderson",
    "Taylor", "Moore",   "Jackson",  "Martin", "Lee",      "Thompson",
    "White",  "Harris",  "Clark",    "Lewis",  "Robinson", "Walker",
    "Young",  "Allen",   "King",     "Wright", "Scott",    "Green"};
const Words kCities = {
    "New York", "Los Angeles", "Chicago",   "Houston",   "Phoenix",
    "Boston",   "Seattle",     "Denver",    "Atlanta",   "Miami",
    "Dallas",   "Austin",      "Portland",  "Detroit",   "London",
    "Paris",    "Berlin",      "Madrid",    "Rome",      "Tokyo",
    "Sydney",   "Toronto",     "Mumbai",    "Shanghai",  "Cairo",
    "Lagos",    "Lima",        "Vienna",    "Prague",    "Dublin"};
const Words kCountries = {
    "United States", "Canada",  "Mexico",    "Brazil",      "Argentina",
    "Germany",       "France",  "Spain",     "Italy",       "Portugal",
    "Netherlands",   "Belgium", "Sweden",    "Norway",      "Poland",
    "Austria",       "Japan",   "China",     "India",       "Australia",
    "Egypt",         "Nigeria", "Kenya",     "Peru",        "Chile",
    "Ireland",       "Greece",  "Turkey",    "South Korea", "Vietnam"};
const Words kStates = {
    "California", "Texas",     "Florida",       "New York",     "Illinois",
    "Ohio",       "Georgia",   "Michigan",      "Virginia",     "Washington",
    "Arizona",    "Colorado",  "Oregon",        "Nevada",       "Utah",
    "Kansas",     "Iowa",      "Alabama",       "Kentucky",     "Louisiana",
    "Maryland",   "Minnesota", "Massachusetts", "Pennsylvania", "Tennessee"};
const Words kDomains = {"gmail.com", "example.org", "corp.net", "mail.io",
                        "outlook.com"};
const Words kSiteWords = {"acme",  "globex", "initech", "umbrella", "stark",
                          "wayne", "hooli",  "vandelay", "tyrell", "wonka"};
const Words kTlds = {"com", "org", "io", "net"};
const Words kPaths = {"", "/about", "/products", "/contact", "/blog/post",
                      "/index.html"};

const std::map<std::string_view, Words> kHeaderForms = {
    {"age", {"age", "customer age", "age_years", "years old"}},
    {"price", {"price", "unit price", "cost", "unit_cost"}},
    {"revenue", {"revenue", "sales", "annual revenue", "turnover"}},
    {"quantity", {"quantity", "qty", "units", "count"}},
    {"year", {"year", "yr", "founded year", "fiscal_year"}},
    {"date", {"date", "order date", "day", "created date"}},
    {"location", {"location", "place"}},
    {"city", {"city", "town", "home city", "city name"}},
    {"country", {"country", "nation", "country name"}},
    {"state", {"state", "province", "region"}},
    {"email", {"email", "e-mail", "contact email", "mail"}},
    {"name", {"name", "full name", "customer", "employee name"}},
    {"phone", {"phone", "telephone", "tel", "phone number"}},
    {"url", {"url", "website", "link", "homepage"}},
    {"zip_code", {"zip", "zip code", "postal code", "zipcode"}},
    {"id", {"id", "record id", "key", "identifier"}},
    {"gender", {"gender", "sex"}},
    {"salary", {"salary", "income", "pay", "wage", "compensation"}},
    {"latitude", {"lat", "latitude"}},
    {"longitude", {"lon", "lng", "longitude"}},
    {"temperature", {"temp", "temperature", "reading"}},
    {"hex_hash", {"hash", "checksum", "digest"}},
    {"product_code", {"sku", "product code", "item code"}},
};

template <typename T>
const T& PickFrom(const std::vector<T>& items, Rng& rng) {
  return items[rng.Below(items.size())];
}

std::string Digits(Rng& rng, int n) {
  std::string out;
  for (int i = 0; i < n; ++i) out.push_back(static_cast<char>('0' + rng.Below(10)));
  return out;
}

std::string Money(double value) { return fmt::format("{:.2f}", value); }

}  // namespace

std::vector<std::string> Kinds() {
  std::vector<std::string> kinds;
  for (const auto& [kind, forms] : kHeaderForms) kinds.emplace_back(kind);
  return kinds;
}

bool IsKnownKind(std::string_view kind) { return kHeaderForms.contains(kind); }

std::span<const std::string_view> HeaderForms(std::string_view kind) {
  auto it = kHeaderForms.find(kind);
  if (it == kHeaderForms.end()) return {};
  return it->second;
}

std::string PickHeader(std::string_view kind, Rng& rng) {
  std::string header(PickFrom(kHeaderForms.at(kind), rng));
  switch (rng.Below(3)) {
    case 0:
      return header;
    case 1: {  // Title Case
      bool start = true;
      for (char& c : header) {
        if (start && c >= 'a' && c <= 'z') c = static_cast<char>(c - 32);
        start = c == ' ' || c == '_';
      }
      return header;
    }
    default:  // snake_case
      std::replace(header.begin(), header.end(), ' ', '_');
      return header;
  }
}

std::vector<std::string> GenerateValues(std::string_view kind, size_t n,
                                        Rng& rng, double missing_rate) {
  std::vector<std::string> values;
  values.reserve(n);
  const bool style = rng.Below(2) == 0;
  const int64_t id_start = rng.Between(1000, 5000);
  const double loc_lo = rng.Real(-60.0, 30.0);
  for (size_t i = 0; i < n; ++i) {
    if (missing_rate > 0.0 && rng.Unit() < missing_rate) {
      values.emplace_back();
      continue;
    }
    std::string v;
    if (kind == "age") {
      v = std::to_string(rng.Between(18, 90));
    } else if (kind == "price") {
      v = (style ? "$" : "") + Money(rng.Real(0.5, 500.0));
    } else if (kind == "revenue") {
      v = Money(std::exp(rng.Real(std::log(1e5), std::log(1e7))));
    } else if (kind == "quantity") {
      v = std::to_string(rng.Between(1, 200));
    } else if (kind == "year") {
      v = std::to_string(rng.Between(1950, 2024));
    } else if (kind == "date") {
      v = fmt::format("{:04d}-{:02d}-{:02d}", rng.Between(2000, 2024),
                      rng.Between(1, 12), rng.Between(1, 28));
    } else if (kind == "location") {
      v = std::string(rng.Below(2) == 0 ? PickFrom(kCities, rng)
                                        : PickFrom(kCountries, rng));
    } else if (kind == "city") {
      v = std::string(PickFrom(kCities, rng));
    } else if (kind == "country") {
      v = std::string(PickFrom(kCountries, rng));
    } else if (kind == "state") {
      v = std::string(PickFrom(kStates, rng));
    } else if (kind == "email") {
      v = AsciiLower(StrCat(PickFrom(kFirstNames, rng), ".",
                            PickFrom(kLastNames, rng), "@",
                            PickFrom(kDomains, rng)));
    } else if (kind == "name") {
      v = StrCat(PickFrom(kFirstNames, rng), " ", PickFrom(kLastNames, rng));
    } else if (kind == "phone") {
      v = style ? StrCat("(", Digits(rng, 3), ") ", Digits(rng, 3), "-",
                         Digits(rng, 4))
                : StrCat(Digits(rng, 3), "-", Digits(rng, 3), "-",
                         Digits(rng, 4));
    } else if (kind == "url") {
      v = StrCat("https://www.", PickFrom(kSiteWords, rng), ".",
                 PickFrom(kTlds, rng), PickFrom(kPaths, rng));
    } else if (kind == "zip_code") {
      v = Digits(rng, 5);
    } else if (kind == "id") {
      v = std::to_string(id_start + static_cast<int64_t>(i));
    } else if (kind == "gender") {
      const bool male = rng.Below(2) == 0;
      v = style ? (male ? "M" : "F") : (male ? "Male" : "Female");
    } else if (kind == "salary") {
      v = std::to_string(rng.Between(60, 360) * 500);
    } else if (kind == "latitude") {
      v = fmt::format("{:.5f}", rng.Real(loc_lo, loc_lo + 30.0));
    } else if (kind == "longitude") {
      v = fmt::format("{:.5f}", rng.Real(-180.0, 180.0));
    } else if (kind == "temperature") {
      v = fmt::format("{:.1f}", rng.Real(-20.0, 45.0));
    } else if (kind == "hex_hash") {
      static constexpr char kHex[] = "0123456789abcdef";
      for (int k = 0; k < 32; ++k) v.push_back(kHex[rng.Below(16)]);
    } else if (kind == "product_code") {
      v = StrCat(static_cast<char>('A' + rng.Below(26)),
                 static_cast<char>('A' + rng.Below(26)), "-", Digits(rng, 4),
                 "-", static_cast<char>('A' + rng.Below(26)));
    }
    values.push_back(std::move(v));
  }
  return values;
}

AnnotatedTable MakeTable(std::string table_id, std::span<const ColumnSpec> spec,
                         size_t rows, Rng& rng) {
  AnnotatedTable out;
  out.table.table_id = std::move(table_id);
  out.table.name = out.table.table_id;
  for (const ColumnSpec& column_spec : spec) {
    Column column;
    column.header = column_spec.header ? *column_spec.header
                                       : PickHeader(column_spec.kind, rng);
    column.values = GenerateValues(column_spec.kind, rows, rng);
    column.primitive = InferPrimitive(column);
    out.table.headers.push_back(column.header);
    out.table.columns.push_back(std::move(column));
    out.annotations.push_back(column_spec.annotate ? column_spec.kind : "");
  }
  return out;
}

std::vector<std::vector<ColumnSpec>> DefaultTemplates() {
  auto col = [](std::string kind, bool annotate = true) {
    return ColumnSpec{std::move(kind), annotate, std::nullopt};
  };
  return {
      {col("id"), col("name"), col("salary", false), col("age"), col("gender"),
       col("email")},
      {col("name"), col("email"), col("phone"), col("city"), col("state"),
       col("zip_code")},
      {col("id"), col("date"), col("product_code"), col("quantity"),
       col("price")},
      {col("country"), col("city"), col("revenue"), col("year"), col("url")},
      {col("city"), col("latitude"), col("longitude"), col("country")},
      {col("date"), col("temperature"), col("hex_hash")},
      {col("name"), col("age"), col("gender"), col("country")},
      {col("name"), col("salary", false), col("location"), col("phone")},
  };
}

std::vector<AnnotatedTable> MakeCorpus(size_t n_tables, uint64_t seed,
                                       std::string_view id_prefix) {
  Rng rng(seed);
  const std::vector<std::vector<ColumnSpec>> templates = DefaultTemplates();
  std::vector<AnnotatedTable> corpus;
  for (size_t i = 0; i < n_tables; ++i) {
    const auto& spec = templates[i % templates.size()];
    const size_t rows = static_cast<size_t>(rng.Between(40, 80));
    corpus.push_back(
        MakeTable(fmt::format("{}{:03d}", id_prefix, i), spec, rows, rng));
  }
  return corpus;
}

namespace {

struct OntologyRow {
  std::string_view id;
  std::string_view canonical;
  std::string_view parent;
  std::string_view synonyms;
};

constexpr std::array<OntologyRow, 17> kOntologyRows = {{
    {"age", "age", "-", "years old,age years"},
    {"price", "price", "-", "cost,unit price,unit cost"},
    {"revenue", "revenue", "-", "sales,turnover,annual revenue"},
    {"quantity", "quantity", "-", "qty,units,count"},
    {"year", "year", "-", "yr,fiscal year"},
    {"date", "date", "-", "day,order date"},
    {"location", "location", "-", "place"},
    {"city", "city", "location", "town"},
    {"country", "country", "location", "nation"},
    {"state", "state", "location", "province,region"},
    {"email", "email", "-", "e-mail,mail,contact email"},
    {"name", "name", "-", "full name,person"},
    {"phone", "phone", "-", "telephone,tel,phone number"},
    {"url", "url", "-", "website,link,homepage"},
    {"zip_code", "zip code", "-", "zip,postal code,zipcode"},
    {"id", "id", "-", "identifier,key,record id"},
    {"gender", "gender", "-", "sex"},
}};

}  // namespace

std::string OntologyFile(std::span<const std::string> types) {
  std::set<std::string_view> keep(types.begin(), types.end());
  std::string out = "# Demo ontology: id, canonical name, parent, synonyms.\n";
  out += "version\t1\n";
  for (const OntologyRow& row : kOntologyRows) {
    if (!keep.contains(row.id)) continue;
    const std::string_view parent =
        keep.contains(row.parent) ? row.parent : std::string_view("-");
    out += StrCat(row.id, "\t", row.canonical, "\t", parent, "\t",
                  row.synonyms, "\n");
  }
  return out;
}

std::string OntologyFile() {
  std::vector<std::string> all;
  for (const OntologyRow& row : kOntologyRows) all.emplace_back(row.id);
  return OntologyFile(all);
}

std::string EmbeddingsFile(uint64_t seed) {
  // One topic per group; OOD headers get topics of their own so they stay
  // far from every ontology type.
  std::vector<std::pair<std::string_view, Words>> topics = {
      {"age", {"age", "years", "old"}},
      {"price", {"price", "cost", "unit", "usd", "dollar"}},
      {"money", {"revenue", "sales", "turnover", "income", "salary", "pay",
                 "wage", "compensation", "earnings", "annual"}},
      {"quantity", {"quantity", "qty", "units", "count", "amount"}},
      {"time", {"date", "year", "yr", "day", "created", "order", "fiscal",
                "founded", "month"}},
      {"place", {"location", "place", "geo"}},
      {"city", {"city", "town", "home"}},
      {"country", {"country", "nation"}},
      {"state", {"state", "province", "region"}},
      {"person", {"name", "full", "person", "customer", "employee", "first",
                  "last"}},
      {"email", {"email", "mail", "e", "contact"}},
      {"phone", {"phone", "telephone", "tel", "number", "mobile"}},
      {"web", {"url", "website", "link", "homepage", "web"}},
      {"postal", {"zip", "code", "postal", "zipcode"}},
      {"id", {"id", "identifier", "key", "record"}},
      {"gender", {"gender", "sex", "male", "female", "m", "f"}},
      {"weather", {"temp", "temperature", "reading"}},
      {"coords", {"lat", "latitude", "lon", "lng", "longitude"}},
      {"digest", {"hash", "checksum", "digest"}},
      {"sku", {"sku", "item", "product"}},
  };
  // Value tokens, grouped with their topic.
  std::map<std::string, std::string_view> token_topic;
  for (const auto& [topic, words] : topics) {
    for (std::string_view w : words) token_topic.emplace(std::string(w), topic);
  }
  auto add_tokens = [&](std::string_view topic, const Words& values) {
    for (std::string_view value : values) {
      for (const std::string& token : Tokenize(value)) {
        token_topic.emplace(token, topic);
      }
    }
  };
  add_tokens("person", kFirstNames);
  add_tokens("person", kLastNames);
  add_tokens("city", kCities);
  add_tokens("country", kCountries);
  add_tokens("state", kStates);
  add_tokens("web", kSiteWords);

  const size_t d = kEmbeddingDimension;
  Rng rng(seed);
  auto gaussian = [&rng]() {
    // Box-Muller on the portable uniform draws.
    const double u1 = std::max(rng.Unit(), 1e-300);
    const double u2 = rng.Unit();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  };
  auto normalize = [](std::vector<double>& v) {
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    for (double& x : v) x /= norm;
  };
  // Orthonormal topic centroids by Gram-Schmidt.
  std::map<std::string_view, std::vector<double>> centroids;
  std::vector<std::vector<double>> basis;
  for (const auto& [topic, words] : topics) {
    std::vector<double> v(d);
    for (double& x : v) x = gaussian();
    for (const std::vector<double>& b : basis) {
      double dot = 0.0;
      for (size_t i = 0; i < d; ++i) dot += v[i] * b[i];
      for (size_t i = 0; i < d; ++i) v[i] -= dot * b[i];
    }
    normalize(v);
    basis.push_back(v);
    centroids[topic] = v;
  }
  std::string out = StrCat(token_topic.size(), " ", d, "\n");
  for (const auto& [token, topic] : token_topic) {
    std::vector<double> v = centroids[topic];
    std::vector<double> noise(d);
    for (double& x : noise) x = gaussian();
    normalize(noise);
    for (size_t i = 0; i < d; ++i) v[i] += 0.45 * noise[i];
    normalize(v);
    out += token;
    for (double x : v) out += fmt::format(" {:.6f}", x);
    out += "\n";
  }
  return out;
}

std::string ToCsv(const Table& table) {
  auto quote = [](std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
      return std::string(field);
    }
    std::string out = "\"";
    for (char c : field) {
      if (c == '"') out.push_back('"');
      out.push_back(c);
    }
    out.push_back('"');
    return out;
  };
  std::string out;
  for (size_t c = 0; c < table.columns.size(); ++c) {
    if (c > 0) out.push_back(',');
    out += quote(table.columns[c].header);
  }
  out.push_back('\n');
  for (size_t r = 0; r < table.num_rows(); ++r) {
    for (size_t c = 0; c < table.columns.size(); ++c) {
      if (c > 0) out.push_back(',');
      out += quote(table.columns[c].values[r]);
    }
    out.push_back('\n');
  }
  return out;
}

std::string LabelsFile(const AnnotatedTable& table) {
  std::string out;
  for (size_t c = 0; c < table.annotations.size(); ++c) {
    if (!table.annotations[c].empty()) {
      out += StrCat(c, "\t", table.annotations[c], "\n");
    }
  }
  return out;
}

absl::Status WriteLabeledCorpus(const fs::path& dir,
                                std::span<const AnnotatedTable> corpus) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    return absl::InternalError(
        StrCat("cannot create ", dir.string(), ": ", ec.message()));
  }
  for (const AnnotatedTable& table : corpus) {
    const std::string& id = table.table.table_id;
    if (absl::Status s = WriteFileAtomic(dir / StrCat(id, ".csv"),
                                         ToCsv(table.table));
        !s.ok()) {
      return s;
    }
    if (absl::Status s = WriteFileAtomic(dir / StrCat(id, ".labels.tsv"),
                                         LabelsFile(table));
        !s.ok()) {
      return s;
    }
  }
  return absl::OkStatus();
}

absl::Status WriteDemoData(const fs::path& dir, uint64_t seed) {
  const fs::path global = dir / "global";
  std::error_code ec;
  fs::create_directories(global / "rules", ec);
  fs::create_directories(dir / "samples", ec);
  if (ec) {
    return absl::InternalError(
        StrCat("cannot create ", global.string(), ": ", ec.message()));
  }
  auto write = [](const fs::path& path, std::string_view content) {
    return WriteFileAtomic(path, content);
  };
  if (absl::Status s = write(global / "ontology.tsv", OntologyFile());
      !s.ok()) {
    return s;
  }
  if (absl::Status s = write(global / "embeddings.txt", EmbeddingsFile(seed));
      !s.ok()) {
    return s;
  }
  auto dictionary = [](const Words& words) {
    std::string out;
    for (std::string_view w : words) out += StrCat(w, "\n");
    return out;
  };
  for (const auto& [type, words] :
       {std::pair{"city", &kCities}, std::pair{"country", &kCountries},
        std::pair{"state", &kStates}}) {
    if (absl::Status s =
            write(global / "rules" / StrCat(type, ".dict"), dictionary(*words));
        !s.ok()) {
      return s;
    }
  }
  if (absl::Status s = write(
          global / "rules" / "kb.tsv",
          "# rule_id\ttype_id\tpattern\n"
          "gender_code\tgender\t(?i)(m|f|male|female)\n"
          "year_4\tyear\t(19|20)[0-9]{2}\n");
      !s.ok()) {
    return s;
  }
  if (absl::Status s = write(global / "config.txt",
                             "# Pipeline defaults.\n"
                             "stage_gate = 0.95\n"
                             "abstain_threshold = 0.5\n"
                             "top_k = 3\n");
      !s.ok()) {
    return s;
  }
  const std::vector<AnnotatedTable> corpus = MakeCorpus(48, seed + 1, "src-");
  if (absl::Status s = WriteLabeledCorpus(global / "corpus", corpus);
      !s.ok()) {
    return s;
  }
  const std::vector<AnnotatedTable> eval = MakeCorpus(10, seed + 2, "eval-");
  if (absl::Status s = WriteLabeledCorpus(dir / "eval", eval); !s.ok()) {
    return s;
  }
  // The motivating sample: an "Income" column holding salaries.
  Rng rng(seed + 3);
  const std::vector<ColumnSpec> employees = {
      {"id", true, "Employee ID"},  {"name", true, "Name"},
      {"salary", false, "Income"},  {"age", true, "Age"},
      {"city", true, "City"}};
  const AnnotatedTable sample = MakeTable("employees", employees, 25, rng);
  return write(dir / "samples" / "employees.csv", ToCsv(sample.table));
}

}  // namespace coltype::synth
