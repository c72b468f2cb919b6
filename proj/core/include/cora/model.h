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

#ifndef CORA_MODEL_H_
#define CORA_MODEL_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "cora/embedding.h"
#include "cora/encoder.h"
#include "cora/graph.h"
#include "cora/parameters.h"
#include "cora/relattn.h"
#include "cora/rng.h"

namespace cora {

// Components that can be removed for ablation runs.
struct Ablations {
  bool no_sent2rel = false;
  bool no_attention_pool = false;
  bool no_aux_obj = false;
  bool no_entity_emb = false;

  bool operator==(const Ablations&) const = default;
};

struct ModelConfig {
  EmbeddingDims embedding;
  EncoderDims encoder;
  double lambda = 0.05;
  double dropout_p = 0.5;
  Ablations ablations;
  // Relation count per hierarchy level, fine-grained first; M = size - 1.
  std::vector<std::size_t> level_sizes;

  std::size_t levels() const { return level_sizes.size(); }
  std::size_t hidden_dim() const { return encoder.hidden_dim(); }
  std::size_t augmented_dim() const { return levels() * hidden_dim(); }
};

using BagInput = std::vector<SentenceInput>;

// Tape handles for one bag's forward pass.
struct BagForward {
  Var probs;                                    // N0 distribution
  std::vector<Var> sentence_reprs;              // s per sentence (post-dropout)
  std::vector<Var> augmented;                   // u per sentence
  std::vector<std::vector<Var>> alphas;         // [sentence][level]
  Var pool_weights;                             // length m
};

// Plain-value result of inference on one bag.
struct BagPrediction {
  Array probs;
  Array pool_weights;
  std::vector<std::vector<Array>> alphas;  // [sentence][level]
};

// The full collaborating relation-augmented attention network. With a single
// level it is the base relation-augmented attention network.
class CoraModel {
 public:
  CoraModel(ModelConfig config, std::size_t vocab_size, std::uint64_t seed);
  // Adopts existing parameters (checkpoint load); names must match.
  CoraModel(ModelConfig config, ParameterStore params);

  CoraModel(const CoraModel& other);
  CoraModel& operator=(const CoraModel& other);

  const ModelConfig& config() const { return config_; }
  ParameterStore& params() { return params_; }
  const ParameterStore& params() const { return params_; }

  // Sentence representation s (before dropout).
  Var EncodeSentence(Graph& g, const SentenceInput& sentence) const;

  // Full bag pipeline. Dropout is applied to s and b when `dropout` is
  // non-null and dropout_p > 0.
  BagForward Forward(Graph& g, const BagInput& bag, Rng* dropout = nullptr) const;

  // Base-model path (u := u0 without concatenation); requires one level.
  BagForward ForwardBase(Graph& g, const BagInput& bag) const;

  BagPrediction Predict(const BagInput& bag) const;

 private:
  void Bind();
  Var Dropout(Graph& g, Var x, Rng* rng) const;

  ModelConfig config_;
  ParameterStore params_;
  EmbeddingParams embedding_;
  PcnnParams pcnn_;
  std::vector<Parameter*> relations_;
  std::vector<MergeParams> merges_;
  BagHeadParams head_;
};

}  // namespace cora

#endif  // CORA_MODEL_H_
