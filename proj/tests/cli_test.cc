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

#include "cli.h"

#include <gtest/gtest.h>

#include "coltype/serialization.h"
#include "coltype/store.h"
#include "test_util.h"

namespace coltype {
namespace {

using testing::RunTool;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    testing::WriteTrainedDemo(dir_.path());
    data_ = dir_.path().string();
    sample_ = (dir_.path() / "samples/employees.csv").string();
  }

  testing::TempDir dir_;
  std::string data_;
  std::string sample_;
};

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(RunTool({}).code, kExitUsage);
  EXPECT_EQ(RunTool({"detect"}).code, kExitUsage);
  EXPECT_EQ(RunTool({"detect", sample_, "--bogus"}).code, kExitUsage);
  EXPECT_EQ(RunTool({"detect", "/nonexistent.csv", "--data", data_}).code,
            kExitUsage);
  EXPECT_EQ(RunTool({"detect", sample_, "--data", data_, "--tau", "2"}).code,
            kExitUsage);
  EXPECT_EQ(
      RunTool({"detect", sample_, "--data", data_, "--config", "nope=1"}).code,
      kExitUsage);
  EXPECT_EQ(RunTool({"detect", sample_, "--data", "/nonexistent"}).code,
            kExitState);
  const auto ok = RunTool({"detect", sample_, "--data", data_});
  EXPECT_EQ(ok.code, kExitOk) << ok.err;
  EXPECT_TRUE(ok.err.empty());
}

TEST_F(CliTest, CorruptParamsIsAStateError) {
  testing::WriteText(dir_.path() / "global/params.snap", "{\"format\":1}");
  const auto run = RunTool({"detect", sample_, "--data", data_});
  EXPECT_EQ(run.code, kExitState);
  EXPECT_FALSE(run.err.empty());
}

TEST_F(CliTest, TopKOneKeepsOneType) {
  const auto run =
      RunTool({"detect", sample_, "--data", data_, "--top-k", "1", "--tau",
               "0"});
  ASSERT_EQ(run.code, kExitOk) << run.err;
  const Json json = Json::parse(run.out);
  ASSERT_EQ(json["columns"].size(), 5u);
  for (const Json& column : json["columns"]) {
    EXPECT_EQ(column["ranked"].size(), 1u);
  }
}

// detect over a stored table and tenant equals the HTTP body byte for byte.
TEST_F(CliTest, DetectMatchesService) {
  StoreOptions options;
  options.data_dir = dir_.path();
  auto store = Store::Open(options);
  ASSERT_TRUE(store.ok());
  auto id = (*store)->UploadTable("acme", testing::ReadText(sample_), {});
  ASSERT_TRUE(id.ok());
  FeedbackEvent event;
  event.event_id = "e1";
  event.table_id = *id;
  event.column_index = 2;
  event.predicted_type = "unknown";
  event.asserted_type = "salary";
  ASSERT_TRUE((*store)->PostFeedback("acme", event).ok());
  const std::string service = DumpJson(*(*store)->Predictions("acme", *id));

  const std::string csv =
      ((*store)->TenantDir("acme") / "tables" / (*id + ".csv")).string();
  const auto run = RunTool({"detect", csv, "--data", data_, "--tenant",
                            "acme", "--table-id", *id});
  ASSERT_EQ(run.code, kExitOk) << run.err;
  EXPECT_EQ(run.out, service);
}

TEST_F(CliTest, EvalAgreesWithRecount) {
  const std::string eval_dir = (dir_.path() / "eval").string();
  const std::string out = (dir_.path() / "preds.jsonl").string();
  for (const char* tau : {"0", "0.5", "0.9"}) {
    const auto run = RunTool({"eval", eval_dir, "--data", data_, "--tau", tau,
                              "--predictions-out", out});
    ASSERT_EQ(run.code, kExitOk) << run.err;
    const Json report = Json::parse(run.out)["report"];
    const auto recount =
        testing::RecountEval(eval_dir, dir_.path() / "global/ontology.tsv",
                             testing::ReadText(out));
    EXPECT_EQ(report["total"], recount.total);
    EXPECT_EQ(report["predicted"], recount.predicted);
    EXPECT_EQ(report["correct"], recount.correct);
    EXPECT_DOUBLE_EQ(report["coverage"].get<double>(),
                     static_cast<double>(recount.predicted) / recount.total);
    if (recount.predicted > 0) {
      EXPECT_DOUBLE_EQ(report["precision"].get<double>(),
                       static_cast<double>(recount.correct) /
                           recount.predicted);
    }
  }
}

TEST_F(CliTest, EvalSweepAndCalibrate) {
  const std::string eval_dir = (dir_.path() / "eval").string();
  const auto sweep = RunTool({"eval", eval_dir, "--data", data_,
                              "--sweep-tau", "--target-precision", "0.9"});
  ASSERT_EQ(sweep.code, kExitOk) << sweep.err;
  const Json json = Json::parse(sweep.out);
  EXPECT_EQ(json["curve"].size(), 101u);
  double previous = 1.1;
  for (const Json& point : json["curve"]) {
    EXPECT_LE(point["coverage"].get<double>(), previous);
    previous = point["coverage"].get<double>();
  }
  const auto calibrate = RunTool({"calibrate", eval_dir, "--data", data_,
                                  "--target-precision", "0.9"});
  ASSERT_EQ(calibrate.code, kExitOk) << calibrate.err;
  EXPECT_EQ(Json::parse(calibrate.out)["tau"], json["calibration"]["tau"]);

  const auto table = RunTool({"eval", eval_dir, "--data", data_, "--format",
                              "table"});
  ASSERT_EQ(table.code, kExitOk);
  EXPECT_NE(table.out.find("precision"), std::string::npos);
}

TEST_F(CliTest, ReplayRebuildsStoreState) {
  StoreOptions options;
  options.data_dir = dir_.path();
  auto store = Store::Open(options);
  ASSERT_TRUE(store.ok());
  auto id = (*store)->UploadTable("acme", testing::ReadText(sample_), {});
  ASSERT_TRUE(id.ok());
  FeedbackEvent correction;
  correction.event_id = "e1";
  correction.table_id = *id;
  correction.column_index = 2;
  correction.predicted_type = "unknown";
  correction.asserted_type = "salary";
  ASSERT_TRUE((*store)->PostFeedback("acme", correction).ok());
  FeedbackEvent approval = correction;
  approval.event_id = "e2";
  approval.column_index = 4;
  approval.predicted_type = "city";
  approval.asserted_type = "city";
  approval.kind = FeedbackKind::kExplicitApproval;
  ASSERT_TRUE((*store)->PostFeedback("acme", approval).ok());
  const Json state = *(*store)->State("acme");

  const std::string log =
      ((*store)->TenantDir("acme") / "feedback.jsonl").string();
  const auto run = RunTool({"replay", log, "--data", data_});
  ASSERT_EQ(run.code, kExitOk) << run.err;
  Json replayed = Json::parse(run.out);
  EXPECT_EQ(replayed["events_applied"], 2);
  EXPECT_EQ(replayed["retrained"], true);
  EXPECT_EQ(replayed["reports"].size(), 2u);
  for (const char* key : {"events_applied", "retrained", "reports"}) {
    replayed.erase(key);
  }
  EXPECT_EQ(replayed, state);

  testing::WriteText(dir_.path() / "bad.jsonl", "{\"event_id\":1}\n");
  EXPECT_EQ(RunTool({"replay", (dir_.path() / "bad.jsonl").string(),
                     "--data", data_})
                .code,
            kExitUsage);
}

TEST_F(CliTest, TrainIsReproducible) {
  const std::string params = (dir_.path() / "global/params.snap").string();
  const std::string before = testing::ReadText(params);
  const auto run = RunTool({"train", "--data", data_});
  ASSERT_EQ(run.code, kExitOk) << run.err;
  EXPECT_EQ(testing::ReadText(params), before);
}

}  // namespace
}  // namespace coltype
