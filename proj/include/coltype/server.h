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

#ifndef COLTYPE_SERVER_H_
#define COLTYPE_SERVER_H_

#include "absl/status/status.h"
#include "coltype/serialization.h"
#include "coltype/store.h"
#include "httplib.h"

namespace coltype {

// HTTP status for a Status code.
int HttpStatusFor(const absl::Status& status);

// {code, message, detail}; detail carries e.g. the CSV byte offset.
Json ErrorBody(const absl::Status& status);

// Routes (tenant from the X-Tenant header):
//   POST /v1/tables                    raw CSV body; ?delimiter=&header=&name=
//   GET  /v1/tables/{id}/predictions   ?ontology_version=
//   POST /v1/feedback                  FeedbackEvent JSON
//   GET  /v1/state
//   GET  /v1/ontology
//   POST /v1/admin/global/reload
void RegisterRoutes(httplib::Server& server, Store& store);

}  // namespace coltype

#endif  // COLTYPE_SERVER_H_
