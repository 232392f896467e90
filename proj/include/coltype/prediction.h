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

#ifndef COLTYPE_PREDICTION_H_
#define COLTYPE_PREDICTION_H_

#include <map>
#include <string>
#include <string_view>

namespace coltype {

// Pipeline stages in execution order (cheapest first).
enum class Stage { kHeader = 0, kLookup = 1, kClassifier = 2 };

std::string_view StageName(Stage stage);

// Per-type confidences in [0, 1] emitted by one stage for one column. A type
// missing from `scores` has confidence 0.
struct StagePrediction {
  Stage stage = Stage::kHeader;
  std::map<std::string, double, std::less<>> scores;

  double Score(std::string_view type_id) const {
    auto it = scores.find(type_id);
    return it == scores.end() ? 0.0 : it->second;
  }
  bool empty() const { return scores.empty(); }
};

}  // namespace coltype

#endif  // COLTYPE_PREDICTION_H_
