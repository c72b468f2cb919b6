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

#ifndef CORA_EMBEDDING_H_
#define CORA_EMBEDDING_H_

#include <cstddef>
#include <istream>
#include <string>
#include <unordered_map>
#include <vector>

#include "cora/graph.h"
#include "cora/parameters.h"
#include "cora/rng.h"

namespace cora {

// Token vocabulary. Index 0 is padding (embeds to zero, never trained) and
// index 1 is the learned unknown-token vector. Entity surface forms are
// single entries (multi-word names arrive underscore-joined).
class Vocab {
 public:
  static constexpr std::size_t kPad = 0;
  static constexpr std::size_t kUnk = 1;
  static constexpr const char* kPadToken = "<pad>";
  static constexpr const char* kUnkToken = "<unk>";

  Vocab();

  std::size_t Add(const std::string& token);
  // Index of `token`, or kUnk.
  std::size_t Lookup(const std::string& token) const;
  bool Contains(const std::string& token) const;
  const std::string& Token(std::size_t index) const { return tokens_.at(index); }
  std::size_t size() const { return tokens_.size(); }
  const std::vector<std::string>& tokens() const { return tokens_; }

  std::vector<std::size_t> Encode(const std::vector<std::string>& tokens) const;

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Sentence prepared for the network.
struct SentenceInput {
  std::vector<std::size_t> token_ids;
  std::size_t head_pos = 0;
  std::size_t tail_pos = 0;
};

struct EmbeddingDims {
  std::size_t word_dim = 50;     // d_w
  std::size_t position_dim = 5;  // d_p
  std::size_t max_distance = 30;
  // d_x is fixed to 3 * d_w so the entity-aware path can be gated in place.
  std::size_t fused_dim() const { return 3 * word_dim; }
  std::size_t position_table_size() const { return 2 * max_distance + 1; }
};

// Clipped signed distances i - anchor in [-max_distance, max_distance].
std::vector<long> RelativeDistances(std::size_t n, std::size_t anchor,
                                    std::size_t max_distance);
// The same distances shifted by max_distance into table indices.
std::vector<std::size_t> RelativePositions(std::size_t n, std::size_t anchor,
                                           std::size_t max_distance);

// Learnable arrays of the embedding layer, bound to a ParameterStore.
// The gate pair is absent when the entity-aware path is ablated.
struct EmbeddingParams {
  Parameter* words = nullptr;     // d_w x |V|
  Parameter* pos_head = nullptr;  // d_p x (2 * max_distance + 1)
  Parameter* pos_tail = nullptr;
  Parameter* gate_w = nullptr;    // d_x x 3 d_w
  Parameter* gate_b = nullptr;    // d_x
  Parameter* proj_w = nullptr;    // d_x x (d_w + 2 d_p)
  Parameter* proj_b = nullptr;    // d_x

  static EmbeddingParams Create(ParameterStore& store, const EmbeddingDims& dims,
                                std::size_t vocab_size, bool entity_gate, Rng& rng);
  static EmbeddingParams Bind(ParameterStore& store, bool entity_gate);
};

// Intermediates of the gated fusion, exposed for diagnostics and tests.
struct EmbeddingTrace {
  Var position_aware;  // X^(p): (d_w + 2 d_p) x n
  Var entity_aware;    // X^(e): 3 d_w x n (invalid without the gate)
  Var gate;            // A^(e) (invalid without the gate)
  Var projected;       // tanh(W_g2 X^(p) + b_g2)
  Var fused;           // X: d_x x n
};

// Builds the relation-extraction word sequence X for one sentence:
//   A = sigmoid(lambda * (W_g1 X^(e) + b_g1))
//   X = A o X^(e) + (1 - A) o tanh(W_g2 X^(p) + b_g2)
// Without the entity gate, X = tanh(W_g2 X^(p) + b_g2).
EmbeddingTrace EmbedSentence(Graph& g, const SentenceInput& sentence,
                             const EmbeddingParams& params, const EmbeddingDims& dims,
                             double lambda);

struct WordVectorLoadStats {
  std::size_t file_vectors = 0;
  std::size_t matched = 0;
  std::size_t random_initialized = 0;
};

// Reads word2vec text vectors ("count dim" header, then "token v1 ... vd")
// into the columns of `table`. Vocabulary entries missing from the file get
// uniform values in [-0.25, 0.25]; padding stays zero.
WordVectorLoadStats LoadWordVectors(std::istream& in, const Vocab& vocab,
                                    Parameter& table, Rng& rng);

}  // namespace cora

#endif  // CORA_EMBEDDING_H_
