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

#ifndef COLTYPE_DPBD_H_
#define COLTYPE_DPBD_H_

#include <span>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "coltype/classifier.h"
#include "coltype/header_matcher.h"
#include "coltype/labeling_function.h"
#include "coltype/model.h"
#include "coltype/table.h"

namespace coltype {

// LF context for a corpus column: its header and the annotations of its
// immediate neighbors.
TableContext CorpusContext(const AnnotatedTable& table, size_t column);

struct CorpusColumnRef {
  size_t table_index = 0;
  size_t column_index = 0;
  bool operator==(const CorpusColumnRef&) const = default;
};

struct GeneratedData {
  std::vector<LabeledExample> examples;
  std::vector<CorpusColumnRef> matched;  // Parallel to examples.
};

// Scans the corpus in table then column order. Every column on which at
// least `min_votes` LFs vote match becomes one example labeled with the LFs'
// type, until `cap` examples exist. All LFs must share one type.
absl::StatusOr<GeneratedData> GenerateTrainingData(
    std::span<const AnnotatedTable> corpus,
    std::span<const LabelingFunction> lfs, int min_votes, size_t cap,
    const EmbeddingStore& embeddings, double weight = 0.5);

// Applies one feedback event to the tenant. A replayed event id returns the
// stored report without touching state. Fails with NotFound for a bad
// column, InvalidArgument for an inconsistent event; on error the tenant is
// unchanged.
absl::StatusOr<AdaptationReport> ProcessFeedback(const GlobalModel& global,
                                                 TenantModel& tenant,
                                                 const FeedbackEvent& event,
                                                 const Table& table);

// Retrains the local classifier from scratch on the global training
// examples plus everything the tenant accumulated.
absl::Status RetrainLocal(const GlobalModel& global, TenantModel& tenant);

}  // namespace coltype

#endif  // COLTYPE_DPBD_H_
