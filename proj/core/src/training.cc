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

#include "cora/training.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cora/errors.h"
#include "cora/ops.h"

namespace cora {
namespace {

bool Finite(const Array& a) { return a.AllFinite(); }

struct BatchGraph {
  std::vector<Var> probs;
  std::vector<std::vector<std::vector<Var>>> alphas;
  std::vector<std::size_t> fine_labels;
  std::vector<std::vector<std::size_t>> labels;
};

BatchGraph ForwardBatch(Graph& g, const CoraModel& model,
                        std::span<const TrainingExample* const> batch, Rng* dropout) {
  BatchGraph out;
  for (const TrainingExample* ex : batch) {
    if (ex->labels.size() != model.config().levels()) {
      throw InputError("bag " + ex->key + " carries " + std::to_string(ex->labels.size()) +
                       " labels for " + std::to_string(model.config().levels()) + " levels");
    }
    BagForward fwd = model.Forward(g, ex->sentences, dropout);
    out.probs.push_back(fwd.probs);
    out.alphas.push_back(std::move(fwd.alphas));
    out.fine_labels.push_back(ex->labels[0]);
    out.labels.push_back(ex->labels);
  }
  return out;
}

bool HasAttention(const BatchGraph& b) {
  return !b.alphas.empty() && !b.alphas[0].empty() && !b.alphas[0][0].empty();
}

std::string OffendingBags(const Graph& g, const BatchGraph& b,
                          std::span<const TrainingExample* const> batch) {
  std::string keys;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    bool bad = !Finite(g.value(b.probs[i]));
    for (const auto& sentence : b.alphas[i]) {
      for (Var a : sentence) bad = bad || !Finite(g.value(a));
    }
    if (bad) keys += (keys.empty() ? "" : ", ") + batch[i]->key;
  }
  if (keys.empty()) {
    for (const TrainingExample* ex : batch) keys += (keys.empty() ? "" : ", ") + ex->key;
  }
  return keys;
}

}  // namespace

void TrainConfig::Validate() const {
  if (!(learning_rate > 0.0)) throw ConfigError("learning_rate must be positive");
  if (batch_size == 0) throw ConfigError("batch_size must be positive");
  if (!(dropout_p >= 0.0 && dropout_p < 1.0)) throw ConfigError("dropout_p must lie in [0, 1)");
  if (!(weight_decay >= 0.0)) throw ConfigError("weight_decay must be non-negative");
  if (!(lambda > 0.0)) throw ConfigError("lambda must be positive");
}

std::vector<TrainingExample> MakeExamples(const std::vector<Bag>& bags,
                                          const std::vector<SentenceRecord>& records,
                                          const Vocab& vocab) {
  std::vector<TrainingExample> out;
  out.reserve(bags.size());
  for (const Bag& bag : bags) {
    TrainingExample ex;
    ex.key = bag.key;
    ex.labels = bag.labels;
    for (std::size_t idx : bag.record_indices) {
      ex.sentences.push_back(ToSentenceInput(records.at(idx), vocab));
    }
    out.push_back(std::move(ex));
  }
  return out;
}

Var LossRe(Graph& g, std::span<const Var> probs, std::span<const std::size_t> labels,
           int* clamp_count) {
  if (probs.empty() || probs.size() != labels.size()) {
    throw InputError("loss_re: need one label per bag and at least one bag");
  }
  std::vector<Var> terms;
  terms.reserve(probs.size());
  for (std::size_t i = 0; i < probs.size(); ++i) {
    terms.push_back(NegLogPick(g, probs[i], labels[i], clamp_count));
  }
  return Affine(g, SumScalars(g, terms), 1.0 / static_cast<double>(terms.size()), 0.0);
}

Var LossAtt(Graph& g, const std::vector<std::vector<std::vector<Var>>>& alphas,
            const std::vector<std::vector<std::size_t>>& labels, int* clamp_count) {
  if (alphas.size() != labels.size()) {
    throw InputError("loss_att: need one label list per bag");
  }
  std::vector<Var> terms;
  for (std::size_t b = 0; b < alphas.size(); ++b) {
    for (const auto& levels : alphas[b]) {
      if (levels.size() != labels[b].size()) {
        throw InputError("loss_att: sentence has " + std::to_string(levels.size()) +
                         " attention levels, labels have " + std::to_string(labels[b].size()));
      }
      for (std::size_t l = 0; l < levels.size(); ++l) {
        terms.push_back(NegLogPick(g, levels[l], labels[b][l], clamp_count));
      }
    }
  }
  if (terms.empty()) throw InputError("loss_att: no attention terms");
  return Affine(g, SumScalars(g, terms), 1.0 / static_cast<double>(terms.size()), 0.0);
}

void AdamState::Update(ParameterStore& params, double learning_rate) {
  const std::uint64_t t = step_ + 1;
  const double c1 = 1.0 - std::pow(kBeta1, static_cast<double>(t));
  const double c2 = 1.0 - std::pow(kBeta2, static_cast<double>(t));
  std::map<std::string, std::pair<Array, Array>> next;
  std::map<std::string, Array> values;
  for (auto& [name, p] : params) {
    auto it = moments_.find(name);
    Array m = it != moments_.end() ? it->second.first : Array(p.value.shape());
    Array v = it != moments_.end() ? it->second.second : Array(p.value.shape());
    if (!m.SameShape(p.value) || !v.SameShape(p.value)) {
      throw ContractError("adam: moment shape mismatch for " + name);
    }
    Array value = p.value;
    for (std::size_t i = 0; i < value.size(); ++i) {
      const double grad = p.grad[i];
      m[i] = kBeta1 * m[i] + (1.0 - kBeta1) * grad;
      v[i] = kBeta2 * v[i] + (1.0 - kBeta2) * grad * grad;
      value[i] -= learning_rate * (m[i] / c1) / (std::sqrt(v[i] / c2) + kEpsilon);
    }
    for (std::size_t c : p.frozen_columns) {
      for (std::size_t r = 0; r < value.rows(); ++r) value.at(r, c) = p.value.at(r, c);
    }
    if (!value.AllFinite()) throw NumericError("adam: non-finite update for " + name);
    next.emplace(name, std::make_pair(std::move(m), std::move(v)));
    values.emplace(name, std::move(value));
  }
  for (auto& [name, p] : params) p.value = std::move(values.at(name));
  moments_ = std::move(next);
  step_ = t;
}

void AdamState::Restore(std::uint64_t step,
                        std::map<std::string, std::pair<Array, Array>> moments) {
  step_ = step;
  moments_ = std::move(moments);
}

Var JointObjective(Graph& g, const CoraModel& model,
                   std::span<const TrainingExample* const> batch, bool with_aux, Rng* dropout) {
  if (batch.empty()) throw InputError("joint_objective: empty batch");
  BatchGraph b = ForwardBatch(g, model, batch, dropout);
  Var loss = LossRe(g, b.probs, b.fine_labels);
  if (with_aux && HasAttention(b)) loss = Add(g, loss, LossAtt(g, b.alphas, b.labels));
  return loss;
}

StepMetrics JointStep(CoraModel& model, std::span<const TrainingExample* const> batch,
                      const TrainConfig& config, AdamState& adam, Rng* dropout) {
  if (batch.empty()) throw InputError("joint_step: empty batch");
  Graph g;
  BatchGraph b = ForwardBatch(g, model, batch, dropout);
  StepMetrics metrics;
  Var loss_re = LossRe(g, b.probs, b.fine_labels, &metrics.clamped);
  Var loss = loss_re;
  const bool aux = !config.ablations.no_aux_obj && HasAttention(b);
  if (aux) {
    Var loss_att = LossAtt(g, b.alphas, b.labels, &metrics.clamped);
    metrics.loss_att = g.value(loss_att)[0];
    loss = Add(g, loss_re, loss_att);
  }
  metrics.loss_re = g.value(loss_re)[0];
  metrics.loss = g.value(loss)[0];
  if (!std::isfinite(metrics.loss)) {
    throw NumericError("joint_step: non-finite loss from bags " + OffendingBags(g, b, batch));
  }
  ParameterStore& params = model.params();
  params.ZeroGrad();
  g.Backward(loss);
  if (config.weight_decay > 0.0) {
    for (auto& [name, p] : params) {
      for (std::size_t i = 0; i < p.value.size(); ++i) {
        p.grad[i] += config.weight_decay * p.value[i];
      }
    }
  }
  adam.Update(params, config.learning_rate);
  metrics.step = adam.step();
  return metrics;
}

StepMetrics EvaluateLoss(const CoraModel& model, std::span<const TrainingExample* const> batch,
                         bool with_aux) {
  if (batch.empty()) throw InputError("evaluate_loss: empty batch");
  Graph g;
  BatchGraph b = ForwardBatch(g, model, batch, nullptr);
  StepMetrics metrics;
  metrics.loss_re = g.value(LossRe(g, b.probs, b.fine_labels, &metrics.clamped))[0];
  if (with_aux && HasAttention(b)) {
    metrics.loss_att = g.value(LossAtt(g, b.alphas, b.labels, &metrics.clamped))[0];
  }
  metrics.loss = metrics.loss_re + metrics.loss_att;
  return metrics;
}

void Train(CoraModel& model, const std::vector<TrainingExample>& data, const TrainConfig& config,
           TrainProgress& progress, const StepCallback& on_step, const EpochCallback& on_epoch) {
  config.Validate();
  if (data.empty()) throw InputError("train: empty dataset");
  std::vector<std::size_t> order(data.size());
  for (std::size_t epoch = progress.epoch; epoch < config.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng shuffle(SubSeed(config.seed, "shuffle", epoch));
    shuffle.Shuffle(order);
    double total = 0.0;
    std::size_t steps = 0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t end = std::min(order.size(), start + config.batch_size);
      std::vector<const TrainingExample*> batch;
      for (std::size_t i = start; i < end; ++i) batch.push_back(&data[order[i]]);
      Rng dropout(SubSeed(config.seed, "dropout", progress.adam.step()));
      StepMetrics m = JointStep(model, batch, config, progress.adam, &dropout);
      total += m.loss;
      ++steps;
      if (on_step) on_step(m);
    }
    progress.epoch = epoch + 1;
    if (on_epoch) on_epoch(epoch, total / static_cast<double>(steps), progress);
  }
}

}  // namespace cora
