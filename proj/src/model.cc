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

#include "coltype/model.h"

namespace coltype {

std::string_view FeedbackKindName(FeedbackKind kind) {
  switch (kind) {
    case FeedbackKind::kExplicitCorrection:
      return "explicit_correction";
    case FeedbackKind::kExplicitApproval:
      return "explicit_approval";
    case FeedbackKind::kImplicitApproval:
      return "implicit_approval";
  }
  return "explicit_correction";
}

std::optional<FeedbackKind> ParseFeedbackKind(std::string_view name) {
  for (FeedbackKind kind :
       {FeedbackKind::kExplicitCorrection, FeedbackKind::kExplicitApproval,
        FeedbackKind::kImplicitApproval}) {
    if (FeedbackKindName(kind) == name) return kind;
  }
  return std::nullopt;
}

std::vector<std::string> TenantModel::UserTypeIds() const {
  std::vector<std::string> ids;
  for (const auto& [id, type] : ontology.types()) {
    if (type.source == TypeSource::kUser) ids.push_back(id);
  }
  return ids;
}

TenantModel NewTenant(const GlobalModel& global, std::string tenant_id) {
  TenantModel tenant;
  tenant.tenant_id = std::move(tenant_id);
  tenant.ontology = global.ontology;
  tenant.weights.prior_strength = global.config.prior_strength;
  return tenant;
}

namespace {

TypeFilter GlobalHeaderTypes(const GlobalModel& global) {
  TypeFilter types;
  for (const std::string& id : global.ontology.TypeIds()) {
    if (id != kUnknownTypeId) types.push_back(id);
  }
  return types;
}

SideModel GlobalSide(const GlobalModel& global) {
  SideModel side;
  side.header_types = GlobalHeaderTypes(global);
  side.rules = global.rules.rules();
  side.lfs = &global.lfs;
  side.params = global.params ? &*global.params : nullptr;
  return side;
}

}  // namespace

PipelineModel MakePipelineModel(const GlobalModel& global,
                                const TenantModel& tenant) {
  PipelineModel model;
  model.ontology = &tenant.ontology;
  model.embeddings = &global.embeddings;
  model.global = GlobalSide(global);
  model.local.header_types = tenant.UserTypeIds();
  model.local.rules = tenant.rules.rules();
  model.local.lfs = &tenant.lfs;
  model.local.params = tenant.params ? &*tenant.params : nullptr;
  model.weights = tenant.weights;
  return model;
}

PipelineModel MakeGlobalOnlyModel(const GlobalModel& global) {
  PipelineModel model;
  model.ontology = &global.ontology;
  model.embeddings = &global.embeddings;
  model.global = GlobalSide(global);
  model.weights.prior_strength = global.config.prior_strength;
  return model;
}

}  // namespace coltype
