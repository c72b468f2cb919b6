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

#ifndef CORA_SYNTHETIC_H_
#define CORA_SYNTHETIC_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "cora/corpus.h"

namespace cora {

// Knobs of the synthetic distant-supervision corpus.
struct SynthConfig {
  // Children per node from the coarsest level down; {2, 2, 2} gives 2 roots,
  // 4 mid-level and 8 fine relations (M = 2).
  std::vector<std::size_t> branching = {2, 2, 2};
  std::size_t vocab_size = 200;  // filler words
  std::size_t min_bag_size = 1;
  std::size_t max_bag_size = 4;
  double zipf_exponent = 1.2;
  double noise_rate = 0.3;
  std::size_t templates_per_relation = 4;
  std::size_t triggers_per_node = 3;
  std::size_t train_bags = 1000;
  std::size_t test_bags = 1000;
  double na_fraction = 0.5;
  std::size_t num_entities = 400;
  std::size_t min_length = 8;
  std::size_t max_length = 16;
  std::uint64_t seed = 1;

  std::size_t depth() const { return branching.empty() ? 0 : branching.size() - 1; }
  void Validate() const;
};

// Ground truth for one generated sentence.
struct ManifestEntry {
  std::string split;  // "train" or "test"
  std::size_t index = 0;
  std::string bag_label;
  std::string true_relation;
  bool mislabeled = false;
};

struct SynthCorpus {
  std::vector<SentenceRecord> train;
  std::vector<SentenceRecord> test;
  std::vector<ManifestEntry> manifest;
  // Fine-grained relations in frequency-rank order (rank 1 first).
  std::vector<std::string> ranked_relations;
};

// Relation frequencies follow Zipf(zipf_exponent) over the ranked fine
// relations; NA bags appear with probability na_fraction. Every sentence is
// rendered from a template of its true relation carrying trigger words for
// the relation and each of its ancestors. With probability noise_rate the
// true relation differs from the bag label, which is recorded in the
// manifest.
SynthCorpus GenerateSynthetic(const SynthConfig& config);

void WriteManifest(std::ostream& out, const std::vector<ManifestEntry>& manifest);
std::vector<ManifestEntry> ReadManifest(std::istream& in);

// Sentences per relation string.
std::map<std::string, std::size_t> RelationCounts(const std::vector<SentenceRecord>& records);

// Fraction of non-NA relations in `relations` with fewer than `threshold`
// sentences.
double LongTailFraction(const std::map<std::string, std::size_t>& counts,
                        const std::vector<std::string>& relations, std::size_t threshold);

}  // namespace cora

#endif  // CORA_SYNTHETIC_H_
