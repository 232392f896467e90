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

#ifndef COLTYPE_CONFIG_H_
#define COLTYPE_CONFIG_H_

#include <string_view>

#include "absl/status/status.h"
#include "coltype/ensemble.h"

namespace coltype {

// Sets one PipelineConfig field from its key (stage_gate, abstain_threshold,
// top_k, sample_cap, fuzzy_floor, max_rows, prior_strength, lf_alpha,
// min_votes, weak_weight, generation_cap, approval_retrain_every). The short
// names c, tau, k, k0 and alpha are accepted too.
absl::Status SetConfigValue(PipelineConfig& config, std::string_view key,
                            std::string_view value);

// Flat "key = value" lines with '#' comments. Later lines win. The result is
// validated.
absl::Status ApplyConfigFile(PipelineConfig& config, std::string_view content);

// "key=value" as given on a command line.
absl::Status ApplyConfigOverride(PipelineConfig& config,
                                 std::string_view assignment);

}  // namespace coltype

#endif  // COLTYPE_CONFIG_H_
