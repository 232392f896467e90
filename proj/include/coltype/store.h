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

#ifndef COLTYPE_STORE_H_
#define COLTYPE_STORE_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "coltype/model.h"
#include "coltype/serialization.h"
#include "coltype/table.h"

namespace coltype {

struct StoreOptions {
  std::filesystem::path data_dir;
  std::vector<std::string> config_overrides;
  size_t max_upload_bytes = size_t{16} << 20;
  // A tenant snapshot is written after this many applied events.
  int64_t snapshot_every = 5;
};

bool IsValidTenantId(std::string_view tenant_id);
bool IsValidTableId(std::string_view table_id);

// Loads a stored table of one tenant.
using TableLoader =
    std::function<absl::StatusOr<Table>(std::string_view table_id)>;

// Applies feedback log lines (JSON, one event each) to `tenant` in order.
// Malformed lines fail with InvalidArgument naming the 1-based line number
// (offset by `first_line`).
absl::Status ReplayFeedback(const GlobalModel& global, TenantModel& tenant,
                            const std::vector<std::string>& lines,
                            const TableLoader& load_table,
                            size_t first_line = 1);

// Tenant state from its directory: the snapshot (when it matches the global
// fingerprint) plus the feedback log tail. Never writes.
absl::StatusOr<TenantModel> LoadTenant(const GlobalModel& global,
                                       const std::filesystem::path& dir,
                                       std::string_view tenant_id);

// Stored table by id from a tenant directory.
absl::StatusOr<Table> LoadStoredTable(const std::filesystem::path& tenant_dir,
                                      std::string_view table_id);

// Multi-tenant, event-sourced state over one data directory:
//   global/{ontology.tsv, embeddings.txt, rules/, params.snap, corpus/}
//   tenants/<id>/{feedback.jsonl, snapshot.snap, tables/}
// Readers work on immutable snapshots; writes serialize per tenant.
class Store {
 public:
  static absl::StatusOr<std::unique_ptr<Store>> Open(StoreOptions options);

  std::shared_ptr<const GlobalModel> global() const;
  const StoreOptions& options() const { return options_; }

  // Loads the global model again and swaps it in atomically. On failure the
  // old model stays. Returns the new global generation.
  absl::StatusOr<int64_t> ReloadGlobal();
  int64_t global_generation() const;

  // Persists the CSV and returns a new sequential id ("tbl-000001", ...).
  absl::StatusOr<std::string> UploadTable(std::string_view tenant_id,
                                          std::string_view bytes,
                                          const CsvOptions& options,
                                          std::string_view name = "");
  absl::StatusOr<Table> GetTable(std::string_view tenant_id,
                                 std::string_view table_id) const;

  // Prediction JSON for a stored table. With `expected_ontology_version`,
  // a mismatch fails with Aborted.
  absl::StatusOr<Json> Predictions(
      std::string_view tenant_id, std::string_view table_id,
      std::optional<int64_t> expected_ontology_version = std::nullopt);

  struct FeedbackResult {
    AdaptationReport report;
    bool duplicate = false;
  };
  // Logs (with fsync) and applies one event. Duplicate ids return the
  // original report and change nothing.
  absl::StatusOr<FeedbackResult> PostFeedback(std::string_view tenant_id,
                                              FeedbackEvent event);

  absl::StatusOr<Json> State(std::string_view tenant_id);
  absl::StatusOr<Json> OntologyView(std::string_view tenant_id);

  // Current tenant model (built from disk on first use).
  absl::StatusOr<std::shared_ptr<const TenantModel>> Tenant(
      std::string_view tenant_id);
  absl::Status WriteSnapshot(std::string_view tenant_id);

  std::filesystem::path TenantDir(std::string_view tenant_id) const;

 private:
  struct TenantSlot {
    std::mutex write_mu;  // Serializes feedback, uploads and rebuilds.
    mutable std::mutex ptr_mu;
    std::shared_ptr<const TenantModel> model;
    const GlobalModel* built_for = nullptr;
    std::shared_ptr<const GlobalModel> global_ref;
  };

  explicit Store(StoreOptions options) : options_(std::move(options)) {}

  TenantSlot& Slot(std::string_view tenant_id);
  // Model consistent with `global`, rebuilding from disk when stale.
  absl::StatusOr<std::shared_ptr<const TenantModel>> TenantFor(
      TenantSlot& slot, std::string_view tenant_id,
      const std::shared_ptr<const GlobalModel>& global);

  StoreOptions options_;
  mutable std::mutex global_mu_;
  std::shared_ptr<const GlobalModel> global_;
  int64_t generation_ = 1;
  std::mutex slots_mu_;
  std::map<std::string, std::unique_ptr<TenantSlot>, std::less<>> slots_;
};

}  // namespace coltype

#endif  // COLTYPE_STORE_H_
