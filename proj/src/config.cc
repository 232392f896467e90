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

#include "coltype/config.h"

#include <charconv>
#include <string>

#include "coltype/text.h"

namespace coltype {
namespace {

absl::Status BadValue(std::string_view key, std::string_view value) {
  return absl::InvalidArgumentError(
      StrCat("bad value '", value, "' for config key '", key, "'"));
}

absl::Status SetDouble(double& field, std::string_view key,
                       std::string_view value) {
  double parsed = 0.0;
  auto [ptr, ec] =
      std::from_chars(value.data(), value.data() + value.size(), parsed);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    return BadValue(key, value);
  }
  field = parsed;
  return absl::OkStatus();
}

template <typename Int>
absl::Status SetInt(Int& field, std::string_view key, std::string_view value) {
  const std::optional<Int> parsed = ParseInt<Int>(value);
  if (!parsed) return BadValue(key, value);
  field = *parsed;
  return absl::OkStatus();
}

}  // namespace

absl::Status SetConfigValue(PipelineConfig& config, std::string_view key,
                            std::string_view value) {
  if (key == "stage_gate" || key == "c") {
    return SetDouble(config.stage_gate, key, value);
  }
  if (key == "abstain_threshold" || key == "tau") {
    return SetDouble(config.abstain_threshold, key, value);
  }
  if (key == "top_k" || key == "k") return SetInt(config.top_k, key, value);
  if (key == "sample_cap") return SetInt(config.sample_cap, key, value);
  if (key == "fuzzy_floor") return SetDouble(config.fuzzy_floor, key, value);
  if (key == "max_rows") return SetInt(config.max_rows, key, value);
  if (key == "prior_strength" || key == "k0") {
    return SetDouble(config.prior_strength, key, value);
  }
  if (key == "lf_alpha" || key == "alpha") {
    return SetDouble(config.lf_alpha, key, value);
  }
  if (key == "min_votes") return SetInt(config.min_votes, key, value);
  if (key == "weak_weight") return SetDouble(config.weak_weight, key, value);
  if (key == "generation_cap") {
    return SetInt(config.generation_cap, key, value);
  }
  if (key == "approval_retrain_every") {
    return SetInt(config.approval_retrain_every, key, value);
  }
  return absl::InvalidArgumentError(StrCat("unknown config key '", key, "'"));
}

absl::Status ApplyConfigOverride(PipelineConfig& config,
                                 std::string_view assignment) {
  const std::vector<std::string_view> parts = SplitN(assignment, '=', 2);
  if (parts.size() != 2) {
    return absl::InvalidArgumentError(
        StrCat("expected key=value, got '", assignment, "'"));
  }
  if (absl::Status status = SetConfigValue(config, TrimWhitespace(parts[0]),
                                           TrimWhitespace(parts[1]));
      !status.ok()) {
    return status;
  }
  return config.Validate();
}

absl::Status ApplyConfigFile(PipelineConfig& config, std::string_view content) {
  int line_number = 0;
  for (std::string_view raw : Split(content, '\n')) {
    ++line_number;
    std::string_view line = TrimWhitespace(raw);
    if (line.empty() || line.front() == '#') continue;
    const std::vector<std::string_view> parts = SplitN(line, '=', 2);
    if (parts.size() != 2) {
      return absl::InvalidArgumentError(
          StrCat("config line ", line_number, ": expected key = value"));
    }
    if (absl::Status status = SetConfigValue(
            config, TrimWhitespace(parts[0]), TrimWhitespace(parts[1]));
        !status.ok()) {
      return absl::InvalidArgumentError(StrCat(
          "config line ", line_number, ": ", std::string(status.message())));
    }
  }
  return config.Validate();
}

}  // namespace coltype
