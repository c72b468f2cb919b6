// Copyright 2026 The CoRA Authors.
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

#ifndef CORA_EVALUATION_H_
#define CORA_EVALUATION_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "cora/corpus.h"
#include "cora/embedding.h"
#include "cora/hierarchy.h"
#include "cora/metrics.h"
#include "cora/model.h"

namespace cora {

struct EvalOptions {
  Retention retention = Retention::kAll;
  // Root seed; retention draws use its "retention" sub-seed per bag.
  std::uint64_t seed = 1;
  bool keep_alphas = true;
};

// Runs the model (no dropout) over every bag and collects scores, gold ids
// and, when requested, per-sentence sent2rel attention.
std::vector<PredictionRecord> PredictBags(const CoraModel& model, const std::vector<Bag>& bags,
                                          const std::vector<SentenceRecord>& records,
                                          const Vocab& vocab, const RelationHierarchy& hierarchy,
                                          const EvalOptions& options = {});

// Training sentences per fine-grained relation id.
std::vector<std::size_t> TrainCounts(const std::vector<SentenceRecord>& records,
                                     const RelationHierarchy& hierarchy);

struct PoolingSplit {
  double clean_mean = 0.0;
  double noisy_mean = 0.0;
  std::size_t clean = 0;
  std::size_t noisy = 0;
};

// Mean attention-pooling weight of flagged versus unflagged sentences over
// bags with at least `min_bag_size` sentences. `flagged` is indexed like
// `records`.
PoolingSplit PoolingWeightsByFlag(const CoraModel& model, const std::vector<Bag>& bags,
                                  const std::vector<SentenceRecord>& records, const Vocab& vocab,
                                  const std::vector<bool>& flagged, std::size_t min_bag_size = 2);

}  // namespace cora

#endif  // CORA_EVALUATION_H_
