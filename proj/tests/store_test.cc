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

#include <gtest/gtest.h>

#include <filesystem>

#include "coltype/corpus.h"
#include "coltype/serialization.h"
#include "test_util.h"

namespace coltype {
namespace {

namespace fs = std::filesystem;

class StoreTest : public ::testing::Test {
 protected:
  void SetUp() override {
    testing::WriteTrainedDemo(dir_.path());
    sample_ = testing::ReadText(dir_.path() / "samples/employees.csv");
    Reopen();
  }

  void Reopen(int64_t snapshot_every = 5) {
    store_.reset();
    StoreOptions options;
    options.data_dir = dir_.path();
    options.snapshot_every = snapshot_every;
    auto store = Store::Open(options);
    ASSERT_TRUE(store.ok()) << store.status();
    store_ = *std::move(store);
  }

  std::string Upload(std::string_view tenant) {
    auto id = store_->UploadTable(tenant, sample_, CsvOptions{});
    EXPECT_TRUE(id.ok()) << id.status();
    return id.ok() ? *id : "";
  }

  static FeedbackEvent Event(std::string id, std::string table, size_t col,
                             std::string predicted, std::string asserted,
                             FeedbackKind kind) {
    FeedbackEvent event;
    event.event_id = std::move(id);
    event.table_id = std::move(table);
    event.column_index = col;
    event.predicted_type = std::move(predicted);
    event.asserted_type = std::move(asserted);
    event.kind = kind;
    return event;
  }

  std::string Snapshot(std::string_view tenant) {
    auto model = store_->Tenant(tenant);
    EXPECT_TRUE(model.ok());
    return SerializeTenant(**model, store_->global()->fingerprint);
  }

  testing::TempDir dir_;
  std::string sample_;
  std::unique_ptr<Store> store_;
};

TEST_F(StoreTest, TableIdsAreSequentialPerTenant) {
  EXPECT_EQ(Upload("acme"), "tbl-000001");
  EXPECT_EQ(Upload("acme"), "tbl-000002");
  EXPECT_EQ(Upload("globex"), "tbl-000001");
  auto table = store_->GetTable("acme", "tbl-000002");
  ASSERT_TRUE(table.ok());
  EXPECT_EQ(table->table_id, "tbl-000002");
  EXPECT_EQ(table->columns.size(), 5u);
  EXPECT_EQ(store_->GetTable("acme", "tbl-000003").status().code(),
            absl::StatusCode::kNotFound);
  // Malformed ids never name a stored table.
  EXPECT_EQ(store_->GetTable("acme", "../x").status().code(),
            absl::StatusCode::kNotFound);
}

TEST_F(StoreTest, RejectsBadUploads) {
  EXPECT_EQ(store_->UploadTable("../evil", sample_, {}).status().code(),
            absl::StatusCode::kInvalidArgument);
  EXPECT_EQ(store_->UploadTable("acme", "a,b\n\"x", {}).status().code(),
            absl::StatusCode::kInvalidArgument);
  Reopen();
  StoreOptions options = store_->options();
  options.max_upload_bytes = 10;
  store_.reset();
  auto small = Store::Open(options);
  ASSERT_TRUE(small.ok());
  EXPECT_EQ((*small)->UploadTable("acme", sample_, {}).status().code(),
            absl::StatusCode::kResourceExhausted);
}

TEST_F(StoreTest, TenantsAreIsolated) {
  const std::string a = Upload("acme");
  const std::string b = Upload("globex");
  auto before = store_->Predictions("globex", b);
  ASSERT_TRUE(before.ok());
  auto posted = store_->PostFeedback(
      "acme", Event("e1", a, 2, "unknown", "salary",
                    FeedbackKind::kExplicitCorrection));
  ASSERT_TRUE(posted.ok()) << posted.status();
  EXPECT_FALSE(posted->duplicate);

  auto after = store_->Predictions("globex", b);
  ASSERT_TRUE(after.ok());
  EXPECT_EQ(DumpJson(*after), DumpJson(*before));
  auto acme = store_->Predictions("acme", a);
  ASSERT_TRUE(acme.ok());
  EXPECT_EQ((*acme)["revision"], 1);
  EXPECT_EQ((*acme)["columns"][2]["ranked"][0]["type"], "salary");
  EXPECT_EQ((*store_->OntologyView("globex"))["version"],
            store_->global()->ontology.version());
  EXPECT_EQ((*store_->OntologyView("acme"))["version"],
            store_->global()->ontology.version() + 1);
}

TEST_F(StoreTest, DuplicateEventIsAppliedOnce) {
  const std::string a = Upload("acme");
  const auto event = Event("e1", a, 2, "unknown", "salary",
                           FeedbackKind::kExplicitCorrection);
  auto first = store_->PostFeedback("acme", event);
  auto second = store_->PostFeedback("acme", event);
  ASSERT_TRUE(first.ok() && second.ok());
  EXPECT_TRUE(second->duplicate);
  EXPECT_EQ(first->report, second->report);
  const std::string log =
      testing::ReadText(store_->TenantDir("acme") / "feedback.jsonl");
  EXPECT_EQ(std::count(log.begin(), log.end(), '\n'), 1);
  EXPECT_EQ((*store_->State("acme"))["revision"], 1);
}

TEST_F(StoreTest, MismatchedTenantAndVersionAreRejected) {
  const std::string a = Upload("acme");
  auto event = Event("e1", a, 2, "unknown", "salary",
                     FeedbackKind::kExplicitCorrection);
  event.tenant_id = "globex";
  EXPECT_EQ(store_->PostFeedback("acme", event).status().code(),
            absl::StatusCode::kInvalidArgument);
  const int64_t version = store_->global()->ontology.version();
  EXPECT_TRUE(store_->Predictions("acme", a, version).ok());
  EXPECT_EQ(store_->Predictions("acme", a, version + 1).status().code(),
            absl::StatusCode::kAborted);
}

TEST_F(StoreTest, FailedEventIsNotLogged) {
  const std::string a = Upload("acme");
  EXPECT_EQ(store_
                ->PostFeedback("acme", Event("e1", a, 42, "unknown", "salary",
                                             FeedbackKind::kExplicitCorrection))
                .status()
                .code(),
            absl::StatusCode::kNotFound);
  EXPECT_FALSE(fs::exists(store_->TenantDir("acme") / "feedback.jsonl"));
}

// Seven events with a snapshot after the fifth: a fresh store must rebuild
// the same state from snapshot plus tail, and from the log alone.
TEST_F(StoreTest, SnapshotPlusTailEqualsFullReplay) {
  const std::string t1 = Upload("acme");
  const std::string t2 = Upload("acme");
  const std::vector<FeedbackEvent> events = {
      Event("e1", t1, 2, "unknown", "salary",
            FeedbackKind::kExplicitCorrection),
      Event("e2", t1, 4, "city", "city", FeedbackKind::kExplicitApproval),
      Event("e3", t2, 1, "name", "name", FeedbackKind::kImplicitApproval),
      Event("e4", t2, 0, "unknown", "employee id",
            FeedbackKind::kExplicitCorrection),
      Event("e5", t1, 3, "age", "age", FeedbackKind::kExplicitApproval),
      Event("e6", t2, 4, "city", "city", FeedbackKind::kImplicitApproval),
      Event("e7", t2, 2, "unknown", "salary",
            FeedbackKind::kExplicitCorrection),
  };
  for (const auto& event : events) {
    auto result = store_->PostFeedback("acme", event);
    ASSERT_TRUE(result.ok()) << event.event_id << ": " << result.status();
  }
  const fs::path snapshot = store_->TenantDir("acme") / "snapshot.snap";
  ASSERT_TRUE(fs::exists(snapshot));
  const std::string live = Snapshot("acme");
  const std::string live_predictions =
      DumpJson(*store_->Predictions("acme", t2));

  Reopen();
  EXPECT_EQ(Snapshot("acme"), live);
  EXPECT_EQ(DumpJson(*store_->Predictions("acme", t2)), live_predictions);

  fs::remove(snapshot);
  Reopen();
  EXPECT_EQ(Snapshot("acme"), live);
}

TEST_F(StoreTest, BadReloadKeepsServingOldModel) {
  const std::string a = Upload("acme");
  const std::string before = DumpJson(*store_->Predictions("acme", a));
  const int64_t generation = store_->global_generation();
  const fs::path ontology = dir_.path() / "global/ontology.tsv";
  const std::string good = testing::ReadText(ontology);
  testing::WriteText(ontology, "version\t1\nbroken line\n");
  auto reload = store_->ReloadGlobal();
  EXPECT_FALSE(reload.ok());
  EXPECT_EQ(store_->global_generation(), generation);
  EXPECT_EQ(DumpJson(*store_->Predictions("acme", a)), before);

  testing::WriteText(ontology, good);
  auto ok = store_->ReloadGlobal();
  ASSERT_TRUE(ok.ok()) << ok.status();
  EXPECT_EQ(*ok, generation + 1);
  EXPECT_EQ(DumpJson(*store_->Predictions("acme", a)), before);
}

TEST_F(StoreTest, CorruptLogNamesTheLine) {
  const std::string a = Upload("acme");
  ASSERT_TRUE(store_
                  ->PostFeedback("acme",
                                 Event("e1", a, 2, "unknown", "salary",
                                       FeedbackKind::kExplicitCorrection))
                  .ok());
  const fs::path log = store_->TenantDir("acme") / "feedback.jsonl";
  testing::WriteText(log, testing::ReadText(log) + "{not json\n");
  Reopen();
  auto state = store_->State("acme");
  ASSERT_FALSE(state.ok());
  EXPECT_NE(std::string(state.status().message()).find("line 2"),
            std::string::npos);
}

TEST(IdValidationTest, TenantAndTableIds) {
  EXPECT_TRUE(IsValidTenantId("acme-1.b_c"));
  EXPECT_FALSE(IsValidTenantId(""));
  EXPECT_FALSE(IsValidTenantId(".."));
  EXPECT_FALSE(IsValidTenantId("a/b"));
  EXPECT_FALSE(IsValidTenantId(std::string(65, 'a')));
  EXPECT_TRUE(IsValidTableId("tbl-000001"));
  EXPECT_FALSE(IsValidTableId("tbl-"));
  EXPECT_FALSE(IsValidTableId("tbl-12a"));
}

}  // namespace
}  // namespace coltype
