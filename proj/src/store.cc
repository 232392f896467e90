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

#include "coltype/store.h"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>

#include "coltype/corpus.h"
#include "coltype/dpbd.h"
#include "coltype/ensemble.h"
#include "coltype/global_model.h"
#include "coltype/text.h"
#include "fmt/format.h"

namespace coltype {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view kTablePrefix = "tbl-";

bool IsIdChar(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9') || c == '_' || c == '-' || c == '.';
}

absl::Status AppendLineSynced(const fs::path& path, std::string_view line) {
  const int fd = ::open(path.c_str(), O_WRONLY | O_CREAT | O_APPEND, 0644);
  if (fd < 0) {
    return absl::InternalError(
        StrCat("open ", path.string(), ": ", std::strerror(errno)));
  }
  std::string data(line);
  data.push_back('\n');
  size_t written = 0;
  while (written < data.size()) {
    const ssize_t n = ::write(fd, data.data() + written, data.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      ::close(fd);
      return absl::InternalError(
          StrCat("write ", path.string(), ": ", std::strerror(errno)));
    }
    written += static_cast<size_t>(n);
  }
  if (::fsync(fd) != 0) {
    ::close(fd);
    return absl::InternalError(
        StrCat("fsync ", path.string(), ": ", std::strerror(errno)));
  }
  ::close(fd);
  return absl::OkStatus();
}

std::vector<std::string> NonEmptyLines(std::string_view content) {
  std::vector<std::string> lines;
  for (std::string_view line : Split(content, '\n')) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!TrimWhitespace(line).empty()) lines.emplace_back(line);
  }
  return lines;
}

absl::Status WithLine(size_t line, const absl::Status& status) {
  return absl::Status(status.code(), StrCat("feedback line ", line, ": ",
                                            std::string(status.message())));
}

}  // namespace

bool IsValidTenantId(std::string_view tenant_id) {
  if (tenant_id.empty() || tenant_id.size() > 64) return false;
  if (tenant_id == "." || tenant_id == "..") return false;
  return std::all_of(tenant_id.begin(), tenant_id.end(), IsIdChar);
}

bool IsValidTableId(std::string_view table_id) {
  return table_id.size() > kTablePrefix.size() &&
         table_id.substr(0, kTablePrefix.size()) == kTablePrefix &&
         ParseInt<int64_t>(table_id.substr(kTablePrefix.size())).has_value();
}

absl::Status ReplayFeedback(const GlobalModel& global, TenantModel& tenant,
                            const std::vector<std::string>& lines,
                            const TableLoader& load_table, size_t first_line) {
  for (size_t i = 0; i < lines.size(); ++i) {
    const size_t line = first_line + i;
    Json json = Json::parse(lines[i], nullptr, /*allow_exceptions=*/false);
    if (json.is_discarded()) {
      return absl::InvalidArgumentError(
          StrCat("feedback line ", line, ": not valid JSON"));
    }
    absl::StatusOr<FeedbackEvent> event = FeedbackEventFromJson(json);
    if (!event.ok()) return WithLine(line, event.status());
    if (event->tenant_id.empty()) event->tenant_id = tenant.tenant_id;
    absl::StatusOr<Table> table = load_table(event->table_id);
    if (!table.ok()) return WithLine(line, table.status());
    absl::StatusOr<AdaptationReport> report =
        ProcessFeedback(global, tenant, *event, *table);
    if (!report.ok()) return WithLine(line, report.status());
  }
  return absl::OkStatus();
}

absl::StatusOr<Table> LoadStoredTable(const fs::path& tenant_dir,
                                      std::string_view table_id) {
  if (!IsValidTableId(table_id)) {
    return absl::NotFoundError(StrCat("no table '", table_id, "'"));
  }
  const fs::path base = tenant_dir / "tables";
  const fs::path csv = base / StrCat(table_id, ".csv");
  std::error_code ec;
  if (!fs::exists(csv, ec)) {
    return absl::NotFoundError(StrCat("no table '", table_id, "'"));
  }
  absl::StatusOr<std::string> bytes = ReadFile(csv);
  if (!bytes.ok()) return bytes.status();
  absl::StatusOr<std::string> meta_text =
      ReadFile(base / StrCat(table_id, ".meta.json"));
  if (!meta_text.ok()) return meta_text.status();
  Json meta = Json::parse(*meta_text, nullptr, /*allow_exceptions=*/false);
  if (meta.is_discarded() || !meta.is_object()) {
    return absl::DataLossError(StrCat("corrupt metadata for ", table_id));
  }
  CsvOptions options;
  std::string name;
  try {
    const std::string delimiter = meta.value("delimiter", ",");
    options.delimiter = delimiter.empty() ? ',' : delimiter.front();
    options.has_header = meta.value("has_header", true);
    options.max_rows = meta.value("max_rows", size_t{10000});
    name = meta.value("name", "");
  } catch (const Json::exception&) {
    return absl::DataLossError(StrCat("corrupt metadata for ", table_id));
  }
  absl::StatusOr<Table> table = ParseCsv(*bytes, options);
  if (!table.ok()) return table.status();
  table->table_id = std::string(table_id);
  table->name = std::move(name);
  return table;
}

absl::StatusOr<TenantModel> LoadTenant(const GlobalModel& global,
                                       const fs::path& dir,
                                       std::string_view tenant_id) {
  TenantModel tenant = NewTenant(global, std::string(tenant_id));
  std::vector<std::string> lines;
  std::error_code ec;
  if (fs::exists(dir / "feedback.jsonl", ec)) {
    absl::StatusOr<std::string> log = ReadFile(dir / "feedback.jsonl");
    if (!log.ok()) return log.status();
    lines = NonEmptyLines(*log);
  }
  size_t start = 0;
  if (fs::exists(dir / "snapshot.snap", ec)) {
    absl::StatusOr<std::string> text = ReadFile(dir / "snapshot.snap");
    if (!text.ok()) return text.status();
    absl::StatusOr<TenantSnapshot> snapshot = ParseTenant(*text, global);
    // A snapshot from another global model, or one ahead of the log, is
    // ignored: the log is the source of truth.
    if (snapshot.ok() && snapshot->fingerprint == global.fingerprint &&
        snapshot->tenant.tenant_id == tenant_id &&
        snapshot->tenant.events_applied >= 0 &&
        static_cast<size_t>(snapshot->tenant.events_applied) <=
            lines.size()) {
      start = static_cast<size_t>(snapshot->tenant.events_applied);
      tenant = std::move(snapshot->tenant);
    }
  }
  std::vector<std::string> tail(lines.begin() + static_cast<ptrdiff_t>(start),
                                lines.end());
  absl::Status status = ReplayFeedback(
      global, tenant, tail,
      [&dir](std::string_view table_id) {
        return LoadStoredTable(dir, table_id);
      },
      start + 1);
  if (!status.ok()) return status;
  return tenant;
}

absl::StatusOr<std::unique_ptr<Store>> Store::Open(StoreOptions options) {
  absl::StatusOr<GlobalModel> global =
      LoadGlobalModel(options.data_dir / "global", options.config_overrides);
  if (!global.ok()) return global.status();
  std::unique_ptr<Store> store(new Store(std::move(options)));
  store->global_ = std::make_shared<const GlobalModel>(*std::move(global));
  return store;
}

std::shared_ptr<const GlobalModel> Store::global() const {
  std::lock_guard<std::mutex> lock(global_mu_);
  return global_;
}

int64_t Store::global_generation() const {
  std::lock_guard<std::mutex> lock(global_mu_);
  return generation_;
}

absl::StatusOr<int64_t> Store::ReloadGlobal() {
  absl::StatusOr<GlobalModel> global =
      LoadGlobalModel(options_.data_dir / "global", options_.config_overrides);
  if (!global.ok()) return global.status();
  auto fresh = std::make_shared<const GlobalModel>(*std::move(global));
  std::lock_guard<std::mutex> lock(global_mu_);
  global_ = std::move(fresh);
  return ++generation_;
}

fs::path Store::TenantDir(std::string_view tenant_id) const {
  return options_.data_dir / "tenants" / std::string(tenant_id);
}

Store::TenantSlot& Store::Slot(std::string_view tenant_id) {
  std::lock_guard<std::mutex> lock(slots_mu_);
  auto it = slots_.find(tenant_id);
  if (it == slots_.end()) {
    it = slots_
             .emplace(std::string(tenant_id), std::make_unique<TenantSlot>())
             .first;
  }
  return *it->second;
}

absl::StatusOr<std::shared_ptr<const TenantModel>> Store::TenantFor(
    TenantSlot& slot, std::string_view tenant_id,
    const std::shared_ptr<const GlobalModel>& global) {
  {
    std::lock_guard<std::mutex> lock(slot.ptr_mu);
    if (slot.model && slot.built_for == global.get()) return slot.model;
  }
  absl::StatusOr<TenantModel> loaded =
      LoadTenant(*global, TenantDir(tenant_id), tenant_id);
  if (!loaded.ok()) return loaded.status();
  auto model = std::make_shared<const TenantModel>(*std::move(loaded));
  std::lock_guard<std::mutex> lock(slot.ptr_mu);
  slot.model = model;
  slot.built_for = global.get();
  slot.global_ref = global;
  return model;
}

absl::StatusOr<std::shared_ptr<const TenantModel>> Store::Tenant(
    std::string_view tenant_id) {
  if (!IsValidTenantId(tenant_id)) {
    return absl::InvalidArgumentError(
        StrCat("invalid tenant id '", tenant_id, "'"));
  }
  TenantSlot& slot = Slot(tenant_id);
  const std::shared_ptr<const GlobalModel> g = global();
  {
    std::lock_guard<std::mutex> lock(slot.ptr_mu);
    if (slot.model && slot.built_for == g.get()) return slot.model;
  }
  std::lock_guard<std::mutex> write(slot.write_mu);
  return TenantFor(slot, tenant_id, g);
}

absl::StatusOr<std::string> Store::UploadTable(std::string_view tenant_id,
                                               std::string_view bytes,
                                               const CsvOptions& options,
                                               std::string_view name) {
  if (!IsValidTenantId(tenant_id)) {
    return absl::InvalidArgumentError(
        StrCat("invalid tenant id '", tenant_id, "'"));
  }
  if (bytes.size() > options_.max_upload_bytes) {
    return absl::ResourceExhaustedError(
        StrCat("upload of ", bytes.size(), " bytes exceeds the limit of ",
               options_.max_upload_bytes));
  }
  absl::StatusOr<Table> parsed = ParseCsv(bytes, options);
  if (!parsed.ok()) return parsed.status();

  TenantSlot& slot = Slot(tenant_id);
  std::lock_guard<std::mutex> write(slot.write_mu);
  const fs::path tables = TenantDir(tenant_id) / "tables";
  std::error_code ec;
  fs::create_directories(tables, ec);
  if (ec) {
    return absl::InternalError(
        StrCat("cannot create ", tables.string(), ": ", ec.message()));
  }
  int64_t last = 0;
  for (const fs::directory_entry& entry : fs::directory_iterator(tables)) {
    const std::string stem = entry.path().stem().string();
    if (entry.path().extension() == ".csv" && IsValidTableId(stem)) {
      last = std::max(
          last, *ParseInt<int64_t>(std::string_view(stem).substr(
                    kTablePrefix.size())));
    }
  }
  const std::string table_id = fmt::format("{}{:06d}", kTablePrefix, last + 1);
  const Json meta = {{"name", name},
                     {"delimiter", std::string(1, options.delimiter)},
                     {"has_header", options.has_header},
                     {"max_rows", options.max_rows}};
  // Metadata first: a table is visible once its CSV exists.
  if (absl::Status s = WriteFileAtomic(
          tables / StrCat(table_id, ".meta.json"), DumpJson(meta));
      !s.ok()) {
    return s;
  }
  if (absl::Status s =
          WriteFileAtomic(tables / StrCat(table_id, ".csv"), bytes);
      !s.ok()) {
    return s;
  }
  return table_id;
}

absl::StatusOr<Table> Store::GetTable(std::string_view tenant_id,
                                      std::string_view table_id) const {
  if (!IsValidTenantId(tenant_id)) {
    return absl::InvalidArgumentError(
        StrCat("invalid tenant id '", tenant_id, "'"));
  }
  return LoadStoredTable(TenantDir(tenant_id), table_id);
}

absl::StatusOr<Json> Store::Predictions(
    std::string_view tenant_id, std::string_view table_id,
    std::optional<int64_t> expected_ontology_version) {
  const std::shared_ptr<const GlobalModel> g = global();
  absl::StatusOr<std::shared_ptr<const TenantModel>> tenant =
      Tenant(tenant_id);
  if (!tenant.ok()) return tenant.status();
  absl::StatusOr<Table> table = GetTable(tenant_id, table_id);
  if (!table.ok()) return table.status();
  const TenantModel& t = **tenant;
  if (expected_ontology_version &&
      *expected_ontology_version != t.ontology.version()) {
    return absl::AbortedError(
        StrCat("ontology version is ", t.ontology.version(), ", not ",
               *expected_ontology_version));
  }
  // The tenant may have been rebuilt for a newer global model; use the one
  // it was built against so the pair stays consistent.
  std::shared_ptr<const GlobalModel> pair_global = g;
  {
    TenantSlot& slot = Slot(tenant_id);
    std::lock_guard<std::mutex> lock(slot.ptr_mu);
    if (slot.model == *tenant && slot.global_ref) pair_global = slot.global_ref;
  }
  absl::StatusOr<std::vector<FinalPrediction>> predictions = RunPipeline(
      *table, MakePipelineModel(*pair_global, t), pair_global->config);
  if (!predictions.ok()) return predictions.status();
  return PredictionsToJson(table->table_id, t.ontology.version(),
                           t.revision(), *predictions);
}

absl::StatusOr<Store::FeedbackResult> Store::PostFeedback(
    std::string_view tenant_id, FeedbackEvent event) {
  if (!IsValidTenantId(tenant_id)) {
    return absl::InvalidArgumentError(
        StrCat("invalid tenant id '", tenant_id, "'"));
  }
  if (event.tenant_id.empty()) event.tenant_id = std::string(tenant_id);
  if (event.tenant_id != tenant_id) {
    return absl::InvalidArgumentError(
        StrCat("event tenant '", event.tenant_id, "' does not match '",
               tenant_id, "'"));
  }
  TenantSlot& slot = Slot(tenant_id);
  std::lock_guard<std::mutex> write(slot.write_mu);
  const std::shared_ptr<const GlobalModel> g = global();
  absl::StatusOr<std::shared_ptr<const TenantModel>> current =
      TenantFor(slot, tenant_id, g);
  if (!current.ok()) return current.status();
  if (auto it = (*current)->reports.find(event.event_id);
      it != (*current)->reports.end()) {
    return FeedbackResult{it->second, true};
  }
  absl::StatusOr<Table> table = GetTable(tenant_id, event.table_id);
  if (!table.ok()) return table.status();

  TenantModel next = **current;
  absl::StatusOr<AdaptationReport> report =
      ProcessFeedback(*g, next, event, *table);
  if (!report.ok()) return report.status();
  const fs::path dir = TenantDir(tenant_id);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (absl::Status s = AppendLineSynced(
          dir / "feedback.jsonl", FeedbackEventToJson(event).dump());
      !s.ok()) {
    return s;
  }
  auto model = std::make_shared<const TenantModel>(std::move(next));
  {
    std::lock_guard<std::mutex> lock(slot.ptr_mu);
    slot.model = model;
    slot.built_for = g.get();
    slot.global_ref = g;
  }
  if (options_.snapshot_every > 0 &&
      model->events_applied % options_.snapshot_every == 0) {
    // A failed snapshot only costs replay time later.
    (void)WriteFileAtomic(dir / "snapshot.snap",
                          SerializeTenant(*model, g->fingerprint));
  }
  return FeedbackResult{*report, false};
}

absl::Status Store::WriteSnapshot(std::string_view tenant_id) {
  absl::StatusOr<std::shared_ptr<const TenantModel>> tenant =
      Tenant(tenant_id);
  if (!tenant.ok()) return tenant.status();
  const fs::path dir = TenantDir(tenant_id);
  std::error_code ec;
  fs::create_directories(dir, ec);
  return WriteFileAtomic(dir / "snapshot.snap",
                         SerializeTenant(**tenant, global()->fingerprint));
}

absl::StatusOr<Json> Store::State(std::string_view tenant_id) {
  const std::shared_ptr<const GlobalModel> g = global();
  absl::StatusOr<std::shared_ptr<const TenantModel>> tenant =
      Tenant(tenant_id);
  if (!tenant.ok()) return tenant.status();
  return TenantStateToJson(*g, **tenant);
}

absl::StatusOr<Json> Store::OntologyView(std::string_view tenant_id) {
  absl::StatusOr<std::shared_ptr<const TenantModel>> tenant =
      Tenant(tenant_id);
  if (!tenant.ok()) return tenant.status();
  return OntologyToJson((*tenant)->ontology);
}

}  // namespace coltype
