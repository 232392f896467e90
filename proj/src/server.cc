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

#include <string>

#include "coltype/text.h"

namespace coltype {
namespace {

constexpr char kJson[] = "application/json";

std::string CodeName(absl::StatusCode code) {
  switch (code) {
    case absl::StatusCode::kInvalidArgument:
      return "invalid_argument";
    case absl::StatusCode::kNotFound:
      return "not_found";
    case absl::StatusCode::kAlreadyExists:
      return "already_exists";
    case absl::StatusCode::kAborted:
      return "conflict";
    case absl::StatusCode::kResourceExhausted:
      return "payload_too_large";
    case absl::StatusCode::kDataLoss:
      return "state_corrupt";
    case absl::StatusCode::kFailedPrecondition:
      return "failed_precondition";
    default:
      return "internal";
  }
}

void SendJson(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(DumpJson(body), kJson);
}

void SendError(httplib::Response& res, const absl::Status& status) {
  SendJson(res, HttpStatusFor(status), ErrorBody(status));
}

// The X-Tenant header, or an error response.
std::optional<std::string> TenantOf(const httplib::Request& req,
                                    httplib::Response& res) {
  const std::string tenant = req.get_header_value("X-Tenant");
  if (tenant.empty()) {
    SendError(res, absl::InvalidArgumentError("missing X-Tenant header"));
    return std::nullopt;
  }
  if (!IsValidTenantId(tenant)) {
    SendError(res, absl::InvalidArgumentError(
                       StrCat("invalid tenant id '", tenant, "'")));
    return std::nullopt;
  }
  return tenant;
}

}  // namespace

int HttpStatusFor(const absl::Status& status) {
  switch (status.code()) {
    case absl::StatusCode::kOk:
      return 200;
    case absl::StatusCode::kInvalidArgument:
    case absl::StatusCode::kOutOfRange:
      return 400;
    case absl::StatusCode::kNotFound:
      return 404;
    case absl::StatusCode::kAlreadyExists:
    case absl::StatusCode::kAborted:
      return 409;
    case absl::StatusCode::kResourceExhausted:
      return 413;
    default:
      return 500;
  }
}

Json ErrorBody(const absl::Status& status) {
  Json detail = nullptr;
  if (const std::optional<int64_t> offset = CsvErrorOffset(status)) {
    detail = {{"offset", *offset}};
  }
  return {{"code", CodeName(status.code())},
          {"message", std::string(status.message())},
          {"detail", std::move(detail)}};
}

void RegisterRoutes(httplib::Server& server, Store& store) {
  server.Post("/v1/tables", [&store](const httplib::Request& req,
                                     httplib::Response& res) {
    const std::optional<std::string> tenant = TenantOf(req, res);
    if (!tenant) return;
    CsvOptions options;
    options.max_rows = store.global()->config.max_rows;
    if (req.has_param("delimiter")) {
      const std::string d = req.get_param_value("delimiter");
      if (d.size() != 1) {
        SendError(res, absl::InvalidArgumentError(
                           "delimiter must be a single character"));
        return;
      }
      options.delimiter = d.front();
    }
    if (req.has_param("header")) {
      const std::string h = req.get_param_value("header");
      if (h != "true" && h != "false") {
        SendError(res,
                  absl::InvalidArgumentError("header must be true or false"));
        return;
      }
      options.has_header = h == "true";
    }
    absl::StatusOr<std::string> table_id = store.UploadTable(
        *tenant, req.body, options, req.get_param_value("name"));
    if (!table_id.ok()) {
      SendError(res, table_id.status());
      return;
    }
    absl::StatusOr<Table> table = store.GetTable(*tenant, *table_id);
    if (!table.ok()) {
      SendError(res, table.status());
      return;
    }
    SendJson(res, 200,
             {{"table_id", *table_id},
              {"n_rows", table->num_rows()},
              {"n_columns", table->columns.size()}});
  });

  server.Get(R"(/v1/tables/([^/]+)/predictions)",
             [&store](const httplib::Request& req, httplib::Response& res) {
               const std::optional<std::string> tenant = TenantOf(req, res);
               if (!tenant) return;
               std::optional<int64_t> version;
               if (req.has_param("ontology_version")) {
                 version = ParseInt<int64_t>(
                     req.get_param_value("ontology_version"));
                 if (!version) {
                   SendError(res, absl::InvalidArgumentError(
                                      "ontology_version must be an integer"));
                   return;
                 }
               }
               absl::StatusOr<Json> body =
                   store.Predictions(*tenant, req.matches[1].str(), version);
               if (!body.ok()) {
                 SendError(res, body.status());
                 return;
               }
               SendJson(res, 200, *body);
             });

  server.Post("/v1/feedback", [&store](const httplib::Request& req,
                                       httplib::Response& res) {
    const std::optional<std::string> tenant = TenantOf(req, res);
    if (!tenant) return;
    Json json = Json::parse(req.body, nullptr, /*allow_exceptions=*/false);
    if (json.is_discarded()) {
      SendError(res, absl::InvalidArgumentError("body is not valid JSON"));
      return;
    }
    absl::StatusOr<FeedbackEvent> event = FeedbackEventFromJson(json);
    if (!event.ok()) {
      SendError(res, event.status());
      return;
    }
    absl::StatusOr<Store::FeedbackResult> result =
        store.PostFeedback(*tenant, *std::move(event));
    if (!result.ok()) {
      SendError(res, result.status());
      return;
    }
    SendJson(res, result->duplicate ? 409 : 200,
             AdaptationReportToJson(result->report));
  });

  server.Get("/v1/state", [&store](const httplib::Request& req,
                                   httplib::Response& res) {
    const std::optional<std::string> tenant = TenantOf(req, res);
    if (!tenant) return;
    absl::StatusOr<Json> state = store.State(*tenant);
    if (!state.ok()) {
      SendError(res, state.status());
      return;
    }
    SendJson(res, 200, *state);
  });

  server.Get("/v1/ontology", [&store](const httplib::Request& req,
                                      httplib::Response& res) {
    const std::optional<std::string> tenant = TenantOf(req, res);
    if (!tenant) return;
    absl::StatusOr<Json> ontology = store.OntologyView(*tenant);
    if (!ontology.ok()) {
      SendError(res, ontology.status());
      return;
    }
    SendJson(res, 200, *ontology);
  });

  server.Post("/v1/admin/global/reload", [&store](const httplib::Request&,
                                                  httplib::Response& res) {
    absl::StatusOr<int64_t> generation = store.ReloadGlobal();
    if (!generation.ok()) {
      // The old model keeps serving; a bad file is the caller's problem.
      absl::Status status = generation.status();
      SendJson(res, 400, ErrorBody(status));
      return;
    }
    SendJson(res, 200,
             {{"version", *generation},
              {"ontology_version", store.global()->ontology.version()},
              {"fingerprint", store.global()->fingerprint}});
  });
}

}  // namespace coltype
