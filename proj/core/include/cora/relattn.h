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

#ifndef CORA_RELATTN_H_
#define CORA_RELATTN_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "cora/graph.h"
#include "cora/parameters.h"
#include "cora/rng.h"

namespace cora {

// Gate and residual MLP that merge a relation-aware vector c into the
// sentence representation s at one hierarchy level.
struct MergeParams {
  Parameter* gate_w = nullptr;   // d_h x 2 d_h (absent without sent2rel)
  Parameter* gate_b = nullptr;   // d_h
  Parameter* mlp_w1 = nullptr;   // d_h x d_h
  Parameter* mlp_b1 = nullptr;
  Parameter* mlp_w2 = nullptr;   // d_h x d_h
  Parameter* mlp_b2 = nullptr;
  Parameter* ln_gain = nullptr;  // d_h, initialised to 1
  Parameter* ln_bias = nullptr;  // d_h

  static MergeParams Create(ParameterStore& store, std::size_t level,
                            std::size_t hidden, bool with_gate, Rng& rng);
  static MergeParams Bind(ParameterStore& store, std::size_t level, bool with_gate);
};

// Attention-pooling vector and the bag classifier MLP.
struct BagHeadParams {
  Parameter* pool_w = nullptr;  // (1+M) d_h (absent without attention-pooling)
  Parameter* w1 = nullptr;      // D x D
  Parameter* b1 = nullptr;
  Parameter* w2 = nullptr;      // N0 x D
  Parameter* b2 = nullptr;

  static BagHeadParams Create(ParameterStore& store, std::size_t width,
                              std::size_t num_relations, bool with_pool, Rng& rng);
  static BagHeadParams Bind(ParameterStore& store, bool with_pool);
};

std::string RelationMatrixName(std::size_t level);
Parameter& CreateRelationMatrix(ParameterStore& store, std::size_t level,
                                std::size_t hidden, std::size_t num_relations, Rng& rng);

struct Sent2RelResult {
  Var alpha;    // softmax(s^T R), length N
  Var context;  // R alpha, length d_h
};

// Sentence-to-relation attention with s as the query over the columns of R.
Sent2RelResult Sent2Rel(Graph& g, Var sentence, Var relations);

// beta = sigmoid(W_g [s; c] + b_g); u~ = beta o s + (1 - beta) o c;
// u = LayerNorm(s + MLP(u~)).
Var Merge(Graph& g, Var sentence, Var context, const MergeParams& params);

// The merge with the relation path removed: u = LayerNorm(s + MLP(s)).
Var MergeWithoutRelations(Graph& g, Var sentence, const MergeParams& params);

// One hidden tanh layer followed by a linear layer.
Var TwoLayerMlp(Graph& g, Var x, Parameter& w1, Parameter& b1, Parameter& w2,
                Parameter& b2);

struct AugmentResult {
  Var augmented;             // u = [u0; u1; ...; uM]
  std::vector<Var> alphas;   // alpha per level (empty without sent2rel)
  std::vector<Var> per_level;
};

// Runs sent2rel + merge at every level and concatenates the results in
// level order. `relations` is empty when sent2rel is ablated.
AugmentResult Augment(Graph& g, Var sentence, std::span<Parameter* const> relations,
                      std::span<const MergeParams> merges);

// Single-level relation augmentation with u := u0 directly.
AugmentResult AugmentBase(Graph& g, Var sentence, Parameter& relations,
                          const MergeParams& merge);

struct PoolResult {
  Var pooled;   // b
  Var weights;  // softmax(w^T U)
};

// b = U softmax(w^T U) over the columns of U (D x m).
PoolResult AttentionPool(Graph& g, Var bag, Var query);
// Uniform weights over the columns of U.
PoolResult MeanPool(Graph& g, Var bag);

// Categorical distribution over N0 relations from the bag vector.
Var ClassifyBag(Graph& g, Var pooled, const BagHeadParams& head);

}  // namespace cora

#endif  // CORA_RELATTN_H_
