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

#include <benchmark/benchmark.h>

#include <vector>

#include "cora/graph.h"
#include "cora/model.h"
#include "cora/ops.h"
#include "cora/rng.h"
#include "cora/training.h"

namespace cora {
namespace {

constexpr std::size_t kVocab = 500;

ModelConfig BenchConfig(std::size_t levels, std::size_t word_dim, std::size_t channels) {
  ModelConfig c;
  c.embedding.word_dim = word_dim;
  c.embedding.position_dim = 5;
  c.embedding.max_distance = 30;
  c.encoder.channels = channels;
  c.encoder.window = 3;
  c.dropout_p = 0.0;
  const std::vector<std::size_t> all = {9, 5, 3};
  c.level_sizes.assign(all.begin(), all.begin() + static_cast<long>(levels));
  return c;
}

BagInput MakeBag(Rng& rng, std::size_t sentences, std::size_t length) {
  BagInput bag(sentences);
  for (auto& s : bag) {
    for (std::size_t i = 0; i < length; ++i) s.token_ids.push_back(1 + rng.Index(kVocab - 1));
    s.head_pos = rng.Index(length / 2);
    s.tail_pos = length / 2 + rng.Index(length / 2);
  }
  return bag;
}

Array Fill(Rng& rng, std::vector<std::size_t> shape) {
  Array a(std::move(shape));
  for (double& v : a.values()) v = rng.Uniform(-1.0, 1.0);
  return a;
}

// args: input rows, sentence length, channels
void BM_Conv1d(benchmark::State& state) {
  Rng rng(1);
  const auto d_in = static_cast<std::size_t>(state.range(0));
  const auto n = static_cast<std::size_t>(state.range(1));
  const auto d_out = static_cast<std::size_t>(state.range(2));
  const Array x = Fill(rng, {d_in, n});
  const Array kernel = Fill(rng, {d_out, 3 * d_in});
  const Array bias = Fill(rng, {d_out});
  for (auto _ : state) {
    Graph g;
    Var y = Conv1d(g, g.Constant(x), g.Constant(kernel), g.Constant(bias), 3);
    benchmark::DoNotOptimize(g.value(y).values().data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(n));
}
BENCHMARK(BM_Conv1d)->Args({48, 16, 32})->Args({150, 40, 230});

// args: hierarchy levels, sentences per bag
void BM_BagForward(benchmark::State& state) {
  const auto levels = static_cast<std::size_t>(state.range(0));
  const CoraModel model(BenchConfig(levels, 16, 32), kVocab, 3);
  Rng rng(2);
  const BagInput bag = MakeBag(rng, static_cast<std::size_t>(state.range(1)), 16);
  for (auto _ : state) {
    const BagPrediction p = model.Predict(bag);
    benchmark::DoNotOptimize(p.probs.values().data());
  }
}
BENCHMARK(BM_BagForward)->Args({1, 4})->Args({3, 4})->Args({3, 16});

// Forward plus reverse sweep of L_re + L_att for one bag.
void BM_BagForwardBackward(benchmark::State& state) {
  const auto levels = static_cast<std::size_t>(state.range(0));
  CoraModel model(BenchConfig(levels, 16, 32), kVocab, 3);
  Rng rng(2);
  const BagInput bag = MakeBag(rng, static_cast<std::size_t>(state.range(1)), 16);
  const std::vector<std::size_t> fine = {1};
  const std::vector<std::vector<std::size_t>> labels = {
      std::vector<std::size_t>(levels, 1)};
  for (auto _ : state) {
    model.params().ZeroGrad();
    Graph g;
    const BagForward fwd = model.Forward(g, bag);
    const Var probs[] = {fwd.probs};
    Var loss = LossRe(g, probs, fine);
    loss = Add(g, loss, LossAtt(g, {fwd.alphas}, labels));
    g.Backward(loss);
    benchmark::DoNotOptimize(g.value(loss).values().data());
  }
}
BENCHMARK(BM_BagForwardBackward)->Args({1, 4})->Args({3, 4})->Args({3, 16});

}  // namespace
}  // namespace cora

BENCHMARK_MAIN();
