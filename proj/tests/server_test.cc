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

#include "coltype/server.h"

#include <gtest/gtest.h>

#include <thread>

#include "test_util.h"

namespace coltype {
namespace {

class ServerTest : public ::testing::Test {
 protected:
  void SetUp() override {
    testing::WriteTrainedDemo(dir_.path());
    sample_ = testing::ReadText(dir_.path() / "samples/employees.csv");
    StoreOptions options;
    options.data_dir = dir_.path();
    options.max_upload_bytes = 64 * 1024;
    auto store = Store::Open(options);
    ASSERT_TRUE(store.ok()) << store.status();
    store_ = *std::move(store);
    RegisterRoutes(server_, *store_);
    port_ = server_.bind_to_any_port("127.0.0.1");
    ASSERT_GT(port_, 0);
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
    client_ = std::make_unique<httplib::Client>("127.0.0.1", port_);
  }

  void TearDown() override {
    server_.stop();
    if (thread_.joinable()) thread_.join();
  }

  httplib::Headers Tenant(const std::string& id) {
    return {{"X-Tenant", id}};
  }

  std::string UploadSample(const std::string& tenant) {
    auto res = client_->Post("/v1/tables?name=employees", Tenant(tenant),
                             sample_, "text/csv");
    EXPECT_TRUE(res);
    EXPECT_EQ(res->status, 200) << res->body;
    return Json::parse(res->body)["table_id"];
  }

  testing::TempDir dir_;
  std::string sample_;
  std::unique_ptr<Store> store_;
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  std::unique_ptr<httplib::Client> client_;
};

TEST_F(ServerTest, UploadThenPredict) {
  auto res = client_->Post("/v1/tables", Tenant("acme"), sample_, "text/csv");
  ASSERT_TRUE(res);
  ASSERT_EQ(res->status, 200);
  const Json upload = Json::parse(res->body);
  EXPECT_EQ(upload["table_id"], "tbl-000001");
  EXPECT_EQ(upload["n_columns"], 5);
  EXPECT_GT(upload["n_rows"].get<int>(), 10);

  auto predictions =
      client_->Get("/v1/tables/tbl-000001/predictions", Tenant("acme"));
  ASSERT_TRUE(predictions);
  ASSERT_EQ(predictions->status, 200);
  // The HTTP body is the store's JSON, byte for byte.
  EXPECT_EQ(predictions->body,
            DumpJson(*store_->Predictions("acme", "tbl-000001")));
  const Json json = Json::parse(predictions->body);
  EXPECT_EQ(json["columns"].size(), 5u);
  EXPECT_EQ(json["columns"][1]["ranked"][0]["type"], "name");
}

TEST_F(ServerTest, ErrorStatusesAndBodies) {
  auto missing = client_->Get("/v1/state");
  ASSERT_TRUE(missing);
  EXPECT_EQ(missing->status, 400);
  EXPECT_EQ(Json::parse(missing->body)["code"], "invalid_argument");

  auto bad_tenant = client_->Get("/v1/state", Tenant("a/b"));
  EXPECT_EQ(bad_tenant->status, 400);

  auto no_table =
      client_->Get("/v1/tables/tbl-000042/predictions", Tenant("acme"));
  EXPECT_EQ(no_table->status, 404);
  EXPECT_EQ(Json::parse(no_table->body)["code"], "not_found");

  auto bad_csv =
      client_->Post("/v1/tables", Tenant("acme"), "a,b\n1,\"x", "text/csv");
  ASSERT_EQ(bad_csv->status, 400);
  const Json error = Json::parse(bad_csv->body);
  EXPECT_EQ(error["detail"]["offset"], 6);

  auto bad_delimiter = client_->Post("/v1/tables?delimiter=ab",
                                     Tenant("acme"), sample_, "text/csv");
  EXPECT_EQ(bad_delimiter->status, 400);

  auto too_big = client_->Post("/v1/tables", Tenant("acme"),
                               std::string(70 * 1024, 'x'), "text/csv");
  EXPECT_EQ(too_big->status, 413);

  auto bad_json =
      client_->Post("/v1/feedback", Tenant("acme"), "{", "application/json");
  EXPECT_EQ(bad_json->status, 400);
}

TEST_F(ServerTest, FeedbackFlow) {
  const std::string table = UploadSample("acme");
  const Json event = {{"event_id", "e1"},
                      {"table_id", table},
                      {"column_index", 2},
                      {"predicted_type", "unknown"},
                      {"asserted_type", "salary"},
                      {"kind", "explicit_correction"}};
  auto first = client_->Post("/v1/feedback", Tenant("acme"), event.dump(),
                             "application/json");
  ASSERT_TRUE(first);
  ASSERT_EQ(first->status, 200) << first->body;
  const Json report = Json::parse(first->body);
  EXPECT_EQ(report["type_id"], "salary");
  EXPECT_EQ(report["created_type"], true);

  auto again = client_->Post("/v1/feedback", Tenant("acme"), event.dump(),
                             "application/json");
  EXPECT_EQ(again->status, 409);
  EXPECT_EQ(again->body, first->body);

  auto state = client_->Get("/v1/state", Tenant("acme"));
  ASSERT_EQ(state->status, 200);
  EXPECT_EQ(Json::parse(state->body)["revision"], 1);

  auto ontology = client_->Get("/v1/ontology", Tenant("acme"));
  const Json types = Json::parse(ontology->body)["types"];
  bool saw_salary = false;
  for (const Json& type : types) {
    if (type["id"] == "salary") {
      saw_salary = true;
      EXPECT_EQ(type["source"], "user");
    }
  }
  EXPECT_TRUE(saw_salary);

  const int64_t version = Json::parse(ontology->body)["version"];
  auto stale = client_->Get(
      "/v1/tables/" + table + "/predictions?ontology_version=" +
          std::to_string(version - 1),
      Tenant("acme"));
  EXPECT_EQ(stale->status, 409);
  auto fresh = client_->Get("/v1/tables/" + table +
                                "/predictions?ontology_version=" +
                                std::to_string(version),
                            Tenant("acme"));
  EXPECT_EQ(fresh->status, 200);

  auto other = client_->Get("/v1/state", Tenant("globex"));
  EXPECT_EQ(Json::parse(other->body)["revision"], 0);
}

TEST_F(ServerTest, AdminReload) {
  auto ok = client_->Post("/v1/admin/global/reload", "", "text/plain");
  ASSERT_TRUE(ok);
  ASSERT_EQ(ok->status, 200);
  EXPECT_EQ(Json::parse(ok->body)["version"], 2);

  testing::WriteText(dir_.path() / "global/embeddings.txt", "a 1 2\nb 1\n");
  auto bad = client_->Post("/v1/admin/global/reload", "", "text/plain");
  ASSERT_EQ(bad->status, 400);
  EXPECT_FALSE(Json::parse(bad->body)["message"].get<std::string>().empty());
  EXPECT_EQ(store_->global_generation(), 2);
}

TEST(HttpStatusTest, Mapping) {
  EXPECT_EQ(HttpStatusFor(absl::InvalidArgumentError("")), 400);
  EXPECT_EQ(HttpStatusFor(absl::NotFoundError("")), 404);
  EXPECT_EQ(HttpStatusFor(absl::AbortedError("")), 409);
  EXPECT_EQ(HttpStatusFor(absl::ResourceExhaustedError("")), 413);
  EXPECT_EQ(HttpStatusFor(absl::DataLossError("")), 500);
}

}  // namespace
}  // namespace coltype
