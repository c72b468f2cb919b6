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

#include "cora/model.h"

#include "cora/errors.h"
#include "cora/ops.h"

namespace cora {
namespace {

void Validate(const ModelConfig& config) {
  if (config.level_sizes.empty()) {
    throw ConfigError("model: relation hierarchy has no levels");
  }
  for (std::size_t n : config.level_sizes) {
    if (n == 0) throw ConfigError("model: empty relation level");
  }
  if (config.encoder.window % 2 == 0) {
    throw ConfigError("model: window " + std::to_string(config.encoder.window) +
                      " must be odd");
  }
  if (config.dropout_p < 0.0 || config.dropout_p >= 1.0) {
    throw ConfigError("model: dropout_p must lie in [0, 1)");
  }
  if (config.lambda <= 0.0) throw ConfigError("model: lambda must be positive");
  if (config.hidden_dim() < 2) throw ConfigError("model: hidden width below 2");
}

}  // namespace

CoraModel::CoraModel(ModelConfig config, std::size_t vocab_size, std::uint64_t seed)
    : config_(std::move(config)) {
  Validate(config_);
  Rng rng(SubSeed(seed, "init"));
  const auto& ab = config_.ablations;
  const std::size_t hidden = config_.hidden_dim();
  EmbeddingParams::Create(params_, config_.embedding, vocab_size, !ab.no_entity_emb, rng);
  PcnnParams::Create(params_, config_.encoder, config_.embedding.fused_dim(), rng);
  for (std::size_t level = 0; level < config_.levels(); ++level) {
    if (!ab.no_sent2rel) {
      CreateRelationMatrix(params_, level, hidden, config_.level_sizes[level], rng);
    }
    MergeParams::Create(params_, level, hidden, !ab.no_sent2rel, rng);
  }
  BagHeadParams::Create(params_, config_.augmented_dim(), config_.level_sizes[0],
                        !ab.no_attention_pool, rng);
  Bind();
}

CoraModel::CoraModel(ModelConfig config, ParameterStore params)
    : config_(std::move(config)), params_(std::move(params)) {
  Validate(config_);
  Bind();
}

CoraModel::CoraModel(const CoraModel& other)
    : config_(other.config_), params_(other.params_) {
  Bind();
}

CoraModel& CoraModel::operator=(const CoraModel& other) {
  if (this != &other) {
    config_ = other.config_;
    params_ = other.params_;
    Bind();
  }
  return *this;
}

void CoraModel::Bind() {
  const auto& ab = config_.ablations;
  embedding_ = EmbeddingParams::Bind(params_, !ab.no_entity_emb);
  pcnn_ = PcnnParams::Bind(params_);
  relations_.clear();
  merges_.clear();
  for (std::size_t level = 0; level < config_.levels(); ++level) {
    if (!ab.no_sent2rel) {
      Parameter& r = params_.Get(RelationMatrixName(level));
      if (r.value.rows() != config_.hidden_dim() ||
          r.value.cols() != config_.level_sizes[level]) {
        throw ConfigError("model: relation matrix " + r.name + " has shape " +
                          ShapeString(r.value.shape()));
      }
      relations_.push_back(&r);
    }
    merges_.push_back(MergeParams::Bind(params_, level, !ab.no_sent2rel));
  }
  head_ = BagHeadParams::Bind(params_, !ab.no_attention_pool);
}

Var CoraModel::EncodeSentence(Graph& g, const SentenceInput& sentence) const {
  return cora::EncodeSentence(g, sentence, embedding_, config_.embedding, config_.lambda,
                              pcnn_, config_.encoder);
}

Var CoraModel::Dropout(Graph& g, Var x, Rng* rng) const {
  if (rng == nullptr || config_.dropout_p <= 0.0) return x;
  const double keep = 1.0 - config_.dropout_p;
  Array mask(g.value(x).shape());
  for (double& m : mask.values()) m = rng->Bernoulli(keep) ? 1.0 / keep : 0.0;
  return MulConst(g, x, mask);
}

BagForward CoraModel::Forward(Graph& g, const BagInput& bag, Rng* dropout) const {
  if (bag.empty()) throw InputError("predict_bag: empty bag");
  BagForward out;
  for (const SentenceInput& sentence : bag) {
    Var s = Dropout(g, EncodeSentence(g, sentence), dropout);
    AugmentResult aug = Augment(g, s, relations_, merges_);
    out.sentence_reprs.push_back(s);
    out.augmented.push_back(aug.augmented);
    out.alphas.push_back(std::move(aug.alphas));
  }
  Var stacked = StackColumns(g, out.augmented);
  PoolResult pool = head_.pool_w != nullptr
                        ? AttentionPool(g, stacked, g.Param(*head_.pool_w))
                        : MeanPool(g, stacked);
  out.pool_weights = pool.weights;
  out.probs = ClassifyBag(g, Dropout(g, pool.pooled, dropout), head_);
  return out;
}

BagForward CoraModel::ForwardBase(Graph& g, const BagInput& bag) const {
  if (config_.levels() != 1 || relations_.empty() || head_.pool_w == nullptr) {
    throw ConfigError("base model needs exactly one level with sent2rel and pooling");
  }
  if (bag.empty()) throw InputError("predict_bag: empty bag");
  BagForward out;
  for (const SentenceInput& sentence : bag) {
    Var s = EncodeSentence(g, sentence);
    AugmentResult aug = AugmentBase(g, s, *relations_[0], merges_[0]);
    out.sentence_reprs.push_back(s);
    out.augmented.push_back(aug.augmented);
    out.alphas.push_back(std::move(aug.alphas));
  }
  Var stacked = StackColumns(g, out.augmented);
  PoolResult pool = AttentionPool(g, stacked, g.Param(*head_.pool_w));
  out.pool_weights = pool.weights;
  out.probs = ClassifyBag(g, pool.pooled, head_);
  return out;
}

BagPrediction CoraModel::Predict(const BagInput& bag) const {
  Graph g;
  BagForward fwd = Forward(g, bag, nullptr);
  BagPrediction pred;
  pred.probs = g.value(fwd.probs);
  pred.pool_weights = g.value(fwd.pool_weights);
  for (const auto& per_sentence : fwd.alphas) {
    std::vector<Array> levels;
    for (Var a : per_sentence) levels.push_back(g.value(a));
    pred.alphas.push_back(std::move(levels));
  }
  return pred;
}

}  // namespace cora
