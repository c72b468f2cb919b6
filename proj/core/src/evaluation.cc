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

#include "cora/evaluation.h"

#include "cora/errors.h"
#include "cora/rng.h"

namespace cora {

std::vector<PredictionRecord> PredictBags(const CoraModel& model, const std::vector<Bag>& bags,
                                          const std::vector<SentenceRecord>& records,
                                          const Vocab& vocab, const RelationHierarchy& hierarchy,
                                          const EvalOptions& options) {
  std::vector<PredictionRecord> preds;
  preds.reserve(bags.size());
  for (std::size_t b = 0; b < bags.size(); ++b) {
    const Bag& bag = bags[b];
    Rng rng(SubSeed(options.seed, "retention", b));
    const auto kept = RetainSentences(bag.record_indices.size(), options.retention, rng);
    BagInput input;
    std::vector<const SentenceRecord*> kept_records;
    for (std::size_t k : kept) {
      const SentenceRecord& r = records.at(bag.record_indices[k]);
      input.push_back(ToSentenceInput(r, vocab));
      kept_records.push_back(&r);
    }
    const BagPrediction pred = model.Predict(input);
    PredictionRecord rec;
    rec.bag_key = bag.key;
    rec.gold = bag.gold;
    rec.scores = pred.probs.data();
    if (options.keep_alphas && !pred.alphas.empty() && !pred.alphas[0].empty()) {
      for (std::size_t s = 0; s < pred.alphas.size(); ++s) {
        std::vector<std::vector<double>> levels;
        for (const Array& a : pred.alphas[s]) levels.push_back(a.data());
        rec.alphas.push_back(std::move(levels));
        rec.sentence_labels.push_back(hierarchy.Labels(kept_records[s]->relation));
      }
    }
    preds.push_back(std::move(rec));
  }
  return preds;
}

std::vector<std::size_t> TrainCounts(const std::vector<SentenceRecord>& records,
                                     const RelationHierarchy& hierarchy) {
  std::vector<std::size_t> counts(hierarchy.size(0), 0);
  for (const auto& r : records) ++counts[hierarchy.Id(0, r.relation)];
  return counts;
}

PoolingSplit PoolingWeightsByFlag(const CoraModel& model, const std::vector<Bag>& bags,
                                  const std::vector<SentenceRecord>& records, const Vocab& vocab,
                                  const std::vector<bool>& flagged, std::size_t min_bag_size) {
  if (flagged.size() != records.size()) {
    throw InputError("pooling split: flag count does not match record count");
  }
  PoolingSplit out;
  for (const Bag& bag : bags) {
    if (bag.record_indices.size() < min_bag_size) continue;
    BagInput input;
    for (std::size_t idx : bag.record_indices) input.push_back(ToSentenceInput(records[idx], vocab));
    const BagPrediction pred = model.Predict(input);
    for (std::size_t s = 0; s < bag.record_indices.size(); ++s) {
      const double w = pred.pool_weights[s];
      if (flagged[bag.record_indices[s]]) {
        out.noisy_mean += w;
        ++out.noisy;
      } else {
        out.clean_mean += w;
        ++out.clean;
      }
    }
  }
  if (out.clean > 0) out.clean_mean /= static_cast<double>(out.clean);
  if (out.noisy > 0) out.noisy_mean /= static_cast<double>(out.noisy);
  return out;
}

}  // namespace cora
