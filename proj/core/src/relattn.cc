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

#include "cora/relattn.h"

#include <cmath>

#include "cora/errors.h"
#include "cora/ops.h"

namespace cora {
namespace {

Array FanInUniform(std::size_t rows, std::size_t cols, Rng& rng) {
  const double limit = std::sqrt(3.0 / static_cast<double>(cols));
  Array a({rows, cols});
  for (double& v : a.values()) v = rng.Uniform(-limit, limit);
  return a;
}

std::string LevelPrefix(std::size_t level) {
  return "merge" + std::to_string(level) + ".";
}

}  // namespace

MergeParams MergeParams::Create(ParameterStore& store, std::size_t level,
                                std::size_t hidden, bool with_gate, Rng& rng) {
  const std::string p = LevelPrefix(level);
  if (with_gate) {
    store.Add(p + "gate_w", FanInUniform(hidden, 2 * hidden, rng));
    store.Add(p + "gate_b", Array({hidden}));
  }
  store.Add(p + "mlp_w1", FanInUniform(hidden, hidden, rng));
  store.Add(p + "mlp_b1", Array({hidden}));
  store.Add(p + "mlp_w2", FanInUniform(hidden, hidden, rng));
  store.Add(p + "mlp_b2", Array({hidden}));
  store.Add(p + "ln_gain", Array::Filled({hidden}, 1.0));
  store.Add(p + "ln_bias", Array({hidden}));
  return Bind(store, level, with_gate);
}

MergeParams MergeParams::Bind(ParameterStore& store, std::size_t level, bool with_gate) {
  const std::string p = LevelPrefix(level);
  MergeParams m;
  if (with_gate) {
    m.gate_w = &store.Get(p + "gate_w");
    m.gate_b = &store.Get(p + "gate_b");
  }
  m.mlp_w1 = &store.Get(p + "mlp_w1");
  m.mlp_b1 = &store.Get(p + "mlp_b1");
  m.mlp_w2 = &store.Get(p + "mlp_w2");
  m.mlp_b2 = &store.Get(p + "mlp_b2");
  m.ln_gain = &store.Get(p + "ln_gain");
  m.ln_bias = &store.Get(p + "ln_bias");
  return m;
}

BagHeadParams BagHeadParams::Create(ParameterStore& store, std::size_t width,
                                    std::size_t num_relations, bool with_pool, Rng& rng) {
  if (with_pool) {
    const double limit = std::sqrt(3.0 / static_cast<double>(width));
    Array w({width});
    for (double& v : w.values()) v = rng.Uniform(-limit, limit);
    store.Add("pool.w", std::move(w));
  }
  store.Add("head.w1", FanInUniform(width, width, rng));
  store.Add("head.b1", Array({width}));
  store.Add("head.w2", FanInUniform(num_relations, width, rng));
  store.Add("head.b2", Array({num_relations}));
  return Bind(store, with_pool);
}

BagHeadParams BagHeadParams::Bind(ParameterStore& store, bool with_pool) {
  BagHeadParams h;
  if (with_pool) h.pool_w = &store.Get("pool.w");
  h.w1 = &store.Get("head.w1");
  h.b1 = &store.Get("head.b1");
  h.w2 = &store.Get("head.w2");
  h.b2 = &store.Get("head.b2");
  return h;
}

std::string RelationMatrixName(std::size_t level) {
  return "rel" + std::to_string(level) + ".R";
}

Parameter& CreateRelationMatrix(ParameterStore& store, std::size_t level,
                                std::size_t hidden, std::size_t num_relations, Rng& rng) {
  return store.Add(RelationMatrixName(level), FanInUniform(hidden, num_relations, rng));
}

Sent2RelResult Sent2Rel(Graph& g, Var sentence, Var relations) {
  const Array& s = g.value(sentence);
  const Array& r = g.value(relations);
  if (!s.is_vector() || r.rank() != 2 || r.rows() != s.size()) {
    throw DimensionError("sent2rel: sentence " + ShapeString(s.shape()) +
                         " cannot attend relations " + ShapeString(r.shape()));
  }
  Sent2RelResult out;
  Var scores = MatMul(g, Transpose(g, relations), sentence);
  out.alpha = Softmax(g, scores);
  out.context = MatMul(g, relations, out.alpha);
  return out;
}

Var TwoLayerMlp(Graph& g, Var x, Parameter& w1, Parameter& b1, Parameter& w2,
                Parameter& b2) {
  Var hidden = Tanh(g, Add(g, MatMul(g, g.Param(w1), x), g.Param(b1)));
  return Add(g, MatMul(g, g.Param(w2), hidden), g.Param(b2));
}

Var Merge(Graph& g, Var sentence, Var context, const MergeParams& params) {
  if (params.gate_w == nullptr) {
    throw ConfigError("merge: gate parameters missing (sent2rel ablated?)");
  }
  const Var both[] = {sentence, context};
  Var gate_in = ConcatRows(g, both);
  Var beta = Sigmoid(g, Add(g, MatMul(g, g.Param(*params.gate_w), gate_in),
                            g.Param(*params.gate_b)));
  Var mixed = Add(g, Mul(g, beta, sentence),
                  Mul(g, Affine(g, beta, -1.0, 1.0), context));
  Var mlp = TwoLayerMlp(g, mixed, *params.mlp_w1, *params.mlp_b1, *params.mlp_w2,
                        *params.mlp_b2);
  return LayerNorm(g, Add(g, sentence, mlp), g.Param(*params.ln_gain),
                   g.Param(*params.ln_bias));
}

Var MergeWithoutRelations(Graph& g, Var sentence, const MergeParams& params) {
  Var mlp = TwoLayerMlp(g, sentence, *params.mlp_w1, *params.mlp_b1, *params.mlp_w2,
                        *params.mlp_b2);
  return LayerNorm(g, Add(g, sentence, mlp), g.Param(*params.ln_gain),
                   g.Param(*params.ln_bias));
}

AugmentResult Augment(Graph& g, Var sentence, std::span<Parameter* const> relations,
                      std::span<const MergeParams> merges) {
  if (merges.empty()) throw ConfigError("augment: no hierarchy levels");
  if (!relations.empty() && relations.size() != merges.size()) {
    throw ConfigError("augment: " + std::to_string(relations.size()) +
                      " relation matrices for " + std::to_string(merges.size()) +
                      " merge levels");
  }
  AugmentResult out;
  for (std::size_t level = 0; level < merges.size(); ++level) {
    if (relations.empty()) {
      out.per_level.push_back(MergeWithoutRelations(g, sentence, merges[level]));
      continue;
    }
    Sent2RelResult attn = Sent2Rel(g, sentence, g.Param(*relations[level]));
    out.alphas.push_back(attn.alpha);
    out.per_level.push_back(Merge(g, sentence, attn.context, merges[level]));
  }
  out.augmented = ConcatRows(g, out.per_level);
  return out;
}

AugmentResult AugmentBase(Graph& g, Var sentence, Parameter& relations,
                          const MergeParams& merge) {
  AugmentResult out;
  Sent2RelResult attn = Sent2Rel(g, sentence, g.Param(relations));
  out.alphas.push_back(attn.alpha);
  out.augmented = Merge(g, sentence, attn.context, merge);
  out.per_level.push_back(out.augmented);
  return out;
}

PoolResult AttentionPool(Graph& g, Var bag, Var query) {
  const Array& u = g.value(bag);
  const Array& w = g.value(query);
  if (u.rank() != 2) {
    throw DimensionError("attention_pool: bag must be a matrix, got " +
                         ShapeString(u.shape()));
  }
  if (!w.is_vector() || w.size() != u.rows()) {
    throw DimensionError("attention_pool: query " + ShapeString(w.shape()) +
                         " does not match bag " + ShapeString(u.shape()));
  }
  PoolResult out;
  out.weights = Softmax(g, MatMul(g, Transpose(g, bag), query));
  out.pooled = MatMul(g, bag, out.weights);
  return out;
}

PoolResult MeanPool(Graph& g, Var bag) {
  const Array& u = g.value(bag);
  if (u.rank() != 2) {
    throw DimensionError("mean_pool: bag must be a matrix, got " + ShapeString(u.shape()));
  }
  PoolResult out;
  out.weights = g.Constant(Array::Filled({u.cols()}, 1.0 / static_cast<double>(u.cols())));
  out.pooled = MatMul(g, bag, out.weights);
  return out;
}

Var ClassifyBag(Graph& g, Var pooled, const BagHeadParams& head) {
  Var logits = TwoLayerMlp(g, pooled, *head.w1, *head.b1, *head.w2, *head.b2);
  return Softmax(g, logits);
}

}  // namespace cora
