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

#include "cora/embedding.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cora/errors.h"
#include "cora/ops.h"

namespace cora {
namespace {

Array UniformArray(std::vector<std::size_t> shape, double limit, Rng& rng) {
  Array a(std::move(shape));
  for (double& v : a.values()) v = rng.Uniform(-limit, limit);
  return a;
}

// Fan-in scaled uniform: unit-variance inputs give unit-variance outputs.
Array FanInUniform(std::size_t rows, std::size_t cols, Rng& rng) {
  return UniformArray({rows, cols}, std::sqrt(3.0 / static_cast<double>(cols)), rng);
}

constexpr double kEmbeddingInitRange = 0.25;

}  // namespace

Vocab::Vocab() {
  Add(kPadToken);
  Add(kUnkToken);
}

std::size_t Vocab::Add(const std::string& token) {
  auto it = index_.find(token);
  if (it != index_.end()) return it->second;
  const std::size_t id = tokens_.size();
  tokens_.push_back(token);
  index_.emplace(token, id);
  return id;
}

std::size_t Vocab::Lookup(const std::string& token) const {
  auto it = index_.find(token);
  return it == index_.end() ? kUnk : it->second;
}

bool Vocab::Contains(const std::string& token) const {
  return index_.count(token) != 0;
}

std::vector<std::size_t> Vocab::Encode(const std::vector<std::string>& tokens) const {
  std::vector<std::size_t> ids;
  ids.reserve(tokens.size());
  for (const auto& t : tokens) ids.push_back(Lookup(t));
  return ids;
}

std::vector<long> RelativeDistances(std::size_t n, std::size_t anchor,
                                    std::size_t max_distance) {
  if (anchor >= n) {
    throw InputError("relative_positions: anchor " + std::to_string(anchor) +
                     " outside length " + std::to_string(n));
  }
  const long limit = static_cast<long>(max_distance);
  std::vector<long> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const long d = static_cast<long>(i) - static_cast<long>(anchor);
    out[i] = std::clamp(d, -limit, limit);
  }
  return out;
}

std::vector<std::size_t> RelativePositions(std::size_t n, std::size_t anchor,
                                           std::size_t max_distance) {
  const auto distances = RelativeDistances(n, anchor, max_distance);
  std::vector<std::size_t> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = static_cast<std::size_t>(distances[i] + static_cast<long>(max_distance));
  }
  return out;
}

EmbeddingParams EmbeddingParams::Create(ParameterStore& store, const EmbeddingDims& dims,
                                        std::size_t vocab_size, bool entity_gate,
                                        Rng& rng) {
  const std::size_t dw = dims.word_dim, dp = dims.position_dim, dx = dims.fused_dim();
  Array words = UniformArray({dw, vocab_size}, kEmbeddingInitRange, rng);
  for (std::size_t r = 0; r < dw; ++r) words.at(r, Vocab::kPad) = 0.0;
  store.Add("embed.words", std::move(words)).frozen_columns = {Vocab::kPad};
  store.Add("embed.pos_head",
            UniformArray({dp, dims.position_table_size()}, kEmbeddingInitRange, rng));
  store.Add("embed.pos_tail",
            UniformArray({dp, dims.position_table_size()}, kEmbeddingInitRange, rng));
  if (entity_gate) {
    store.Add("embed.gate_w", FanInUniform(dx, 3 * dw, rng));
    store.Add("embed.gate_b", Array({dx}));
  }
  store.Add("embed.proj_w", FanInUniform(dx, dw + 2 * dp, rng));
  store.Add("embed.proj_b", Array({dx}));
  return Bind(store, entity_gate);
}

EmbeddingParams EmbeddingParams::Bind(ParameterStore& store, bool entity_gate) {
  EmbeddingParams p;
  p.words = &store.Get("embed.words");
  p.pos_head = &store.Get("embed.pos_head");
  p.pos_tail = &store.Get("embed.pos_tail");
  if (entity_gate) {
    p.gate_w = &store.Get("embed.gate_w");
    p.gate_b = &store.Get("embed.gate_b");
  }
  p.proj_w = &store.Get("embed.proj_w");
  p.proj_b = &store.Get("embed.proj_b");
  return p;
}

EmbeddingTrace EmbedSentence(Graph& g, const SentenceInput& sentence,
                             const EmbeddingParams& params, const EmbeddingDims& dims,
                             double lambda) {
  const std::size_t n = sentence.token_ids.size();
  if (n == 0) throw InputError("embed_sentence: empty sentence");
  if (sentence.head_pos >= n || sentence.tail_pos >= n) {
    throw InputError("embed_sentence: entity positions " +
                     std::to_string(sentence.head_pos) + ", " +
                     std::to_string(sentence.tail_pos) + " outside length " +
                     std::to_string(n));
  }
  if (sentence.head_pos == sentence.tail_pos) {
    throw InputError("embed_sentence: head and tail share position " +
                     std::to_string(sentence.head_pos));
  }

  EmbeddingTrace trace;
  Var words = GatherColumns(g, *params.words, sentence.token_ids);
  const auto head_idx = RelativePositions(n, sentence.head_pos, dims.max_distance);
  const auto tail_idx = RelativePositions(n, sentence.tail_pos, dims.max_distance);
  Var pos_head = GatherColumns(g, *params.pos_head, head_idx);
  Var pos_tail = GatherColumns(g, *params.pos_tail, tail_idx);
  const Var position_parts[] = {words, pos_head, pos_tail};
  trace.position_aware = ConcatRows(g, position_parts);

  Var proj = MatMul(g, g.Param(*params.proj_w), trace.position_aware);
  trace.projected = Tanh(g, AddBias(g, proj, g.Param(*params.proj_b)));

  if (params.gate_w == nullptr) {
    trace.fused = trace.projected;
    return trace;
  }

  const std::size_t head_id[] = {sentence.token_ids[sentence.head_pos]};
  const std::size_t tail_id[] = {sentence.token_ids[sentence.tail_pos]};
  Var head_vec = GatherColumns(g, *params.words, head_id);
  Var tail_vec = GatherColumns(g, *params.words, tail_id);
  const Var entity_parts[] = {words, BroadcastColumns(g, head_vec, n),
                              BroadcastColumns(g, tail_vec, n)};
  trace.entity_aware = ConcatRows(g, entity_parts);

  Var gate_pre = AddBias(g, MatMul(g, g.Param(*params.gate_w), trace.entity_aware),
                         g.Param(*params.gate_b));
  trace.gate = Sigmoid(g, Affine(g, gate_pre, lambda, 0.0));
  Var keep = Mul(g, trace.gate, trace.entity_aware);
  Var mix = Mul(g, Affine(g, trace.gate, -1.0, 1.0), trace.projected);
  trace.fused = Add(g, keep, mix);
  return trace;
}

WordVectorLoadStats LoadWordVectors(std::istream& in, const Vocab& vocab,
                                    Parameter& table, Rng& rng) {
  WordVectorLoadStats stats;
  std::size_t count = 0, dim = 0;
  std::string header;
  if (!std::getline(in, header)) throw InputError("word vectors: missing header");
  {
    std::istringstream hs(header);
    if (!(hs >> count >> dim)) {
      throw InputError("word vectors: header must be 'count dim', got '" + header + "'");
    }
  }
  if (dim != table.value.rows()) {
    throw InputError("word vectors: file dimension " + std::to_string(dim) +
                     " does not match embedding width " +
                     std::to_string(table.value.rows()));
  }
  std::vector<bool> seen(vocab.size(), false);
  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string token;
    ls >> token;
    std::vector<double> values;
    double v;
    while (ls >> v) values.push_back(v);
    if (values.size() != dim) {
      throw InputError("word vectors: line " + std::to_string(line_no) + " has " +
                       std::to_string(values.size()) + " values, expected " +
                       std::to_string(dim));
    }
    ++stats.file_vectors;
    if (!vocab.Contains(token)) continue;
    const std::size_t id = vocab.Lookup(token);
    if (id == Vocab::kPad) continue;
    for (std::size_t r = 0; r < dim; ++r) table.value.at(r, id) = values[r];
    seen[id] = true;
    ++stats.matched;
  }
  if (stats.file_vectors != count) {
    throw InputError("word vectors: header announces " + std::to_string(count) +
                     " vectors, file holds " + std::to_string(stats.file_vectors));
  }
  for (std::size_t id = 0; id < vocab.size(); ++id) {
    if (id == Vocab::kPad || seen[id]) continue;
    for (std::size_t r = 0; r < dim; ++r) {
      table.value.at(r, id) = rng.Uniform(-kEmbeddingInitRange, kEmbeddingInitRange);
    }
    ++stats.random_initialized;
  }
  return stats;
}

}  // namespace cora
