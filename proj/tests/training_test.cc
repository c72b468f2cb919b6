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

#include <gtest/gtest.h>

#include <cmath>
#include <optional>
#include <vector>

#include "cora/corpus.h"
#include "cora/errors.h"
#include "cora/grad_check.h"
#include "cora/hierarchy.h"
#include "cora/ops.h"
#include "cora/synthetic.h"
#include "cora/training.h"
#include "test_util.h"

namespace cora {
namespace {

using testing::RandomSentence;

std::vector<const TrainingExample*> Pointers(const std::vector<TrainingExample>& data) {
  std::vector<const TrainingExample*> out;
  for (const auto& e : data) out.push_back(&e);
  return out;
}

// Random bags over the {5, 3, 2} tiny hierarchy; labels are consistent with
// a fixed fine -> coarse mapping.
std::vector<TrainingExample> RandomExamples(std::size_t n, std::uint64_t seed) {
  const std::size_t to_mid[] = {0, 1, 1, 2, 2};
  const std::size_t to_top[] = {0, 1, 1};
  Rng rng(seed);
  std::vector<TrainingExample> out;
  for (std::size_t i = 0; i < n; ++i) {
    TrainingExample e;
    e.key = "bag" + std::to_string(i);
    const std::size_t m = 1 + rng.Index(3);
    for (std::size_t s = 0; s < m; ++s) {
      e.sentences.push_back(RandomSentence(rng, 4 + rng.Index(5), testing::kTinyVocab));
    }
    const std::size_t r0 = rng.Index(5);
    e.labels = {r0, to_mid[r0], to_top[to_mid[r0]]};
    out.push_back(std::move(e));
  }
  return out;
}

TEST(LossReTest, ClosedForms) {
  Graph g;
  Var p = g.Constant(Array::Vector({0.5, 0.5}));
  const Var probs[] = {p};
  const std::size_t labels[] = {0};
  EXPECT_NEAR(g.value(LossRe(g, probs, labels))[0], std::log(2.0), 1e-15);

  Var q = g.Constant(Array::Vector({0.0, 1.0}));
  const Var perfect[] = {q};
  const std::size_t one[] = {1};
  EXPECT_EQ(g.value(LossRe(g, perfect, one))[0], 0.0);
}

TEST(LossReTest, ClampsAndCountsZeroProbability) {
  Graph g;
  const Var probs[] = {g.Constant(Array::Vector({1.0, 0.0}))};
  const std::size_t labels[] = {1};
  int clamped = 0;
  const double loss = g.value(LossRe(g, probs, labels, &clamped))[0];
  EXPECT_EQ(clamped, 1);
  EXPECT_NEAR(loss, -std::log(1e-12), 1e-9);
}

TEST(LossReTest, BatchMeanOracle) {
  Rng rng(1);
  Graph g;
  std::vector<Var> probs;
  std::vector<std::size_t> labels;
  double want = 0.0;
  for (int b = 0; b < 17; ++b) {
    const Array p = Softmax(testing::RandomArray(rng, {6}, -3, 3));
    const std::size_t label = rng.Index(6);
    probs.push_back(g.Constant(p));
    labels.push_back(label);
    want += -std::log(p[label]);
  }
  EXPECT_NEAR(g.value(LossRe(g, probs, labels))[0], want / 17.0, 1e-13);
}

TEST(LossAttTest, ClosedForms) {
  Graph g;
  const std::vector<std::vector<std::vector<Var>>> alphas = {
      {{g.Constant(Array::Vector({0.25, 0.75}))}}};
  EXPECT_NEAR(g.value(LossAtt(g, alphas, {{1}}))[0], -std::log(0.75), 1e-15);

  const std::vector<std::vector<std::vector<Var>>> perfect = {
      {{g.Constant(Array::Vector({0, 1})), g.Constant(Array::Vector({1, 0, 0}))}}};
  EXPECT_EQ(g.value(LossAtt(g, perfect, {{1, 0}}))[0], 0.0);
}

TEST(LossAttTest, TripleLoopOracle) {
  Rng rng(2);
  Graph g;
  const std::size_t sizes[] = {5, 3, 2};
  std::vector<std::vector<std::vector<Var>>> alphas;
  std::vector<std::vector<std::size_t>> labels;
  double sum = 0.0;
  std::size_t terms = 0;
  for (int b = 0; b < 6; ++b) {
    labels.push_back({rng.Index(5), rng.Index(3), rng.Index(2)});
    std::vector<std::vector<Var>> bag;
    const std::size_t m = 1 + rng.Index(4);
    for (std::size_t s = 0; s < m; ++s) {
      std::vector<Var> levels;
      for (std::size_t l = 0; l < 3; ++l) {
        const Array a = Softmax(testing::RandomArray(rng, {sizes[l]}, -2, 2));
        levels.push_back(g.Constant(a));
        sum += -std::log(a[labels.back()[l]]);
        ++terms;
      }
      bag.push_back(std::move(levels));
    }
    alphas.push_back(std::move(bag));
  }
  EXPECT_NEAR(g.value(LossAtt(g, alphas, labels))[0], sum / static_cast<double>(terms), 1e-13);
}

TEST(LossAttTest, LabelOutOfRangeIsInputError) {
  Graph g;
  const std::vector<std::vector<std::vector<Var>>> alphas = {
      {{g.Constant(Array::Vector({0.25, 0.75}))}}};
  EXPECT_THROW(LossAtt(g, alphas, {{2}}), InputError);
}

TEST(AdamTest, ZeroGradientIsFixedPoint) {
  ParameterStore store;
  Rng rng(3);
  store.Add("a", testing::RandomArray(rng, {3, 2}));
  const Array before = store.Get("a").value;
  AdamState adam;
  for (int i = 0; i < 5; ++i) {
    store.ZeroGrad();
    adam.Update(store, 0.1);
  }
  EXPECT_EQ(store.Get("a").value, before);
  EXPECT_EQ(adam.step(), 5u);
}

TEST(AdamTest, FirstStepOnQuadraticMovesByLearningRate) {
  ParameterStore store;
  Parameter& theta = store.Add("theta", Array::Vector({1.0}));
  theta.grad[0] = 2.0 * (theta.value[0] - 5.0);
  AdamState adam;
  adam.Update(store, 0.01);
  // Hand-rolled first Adam step.
  const double g = -8.0;
  const double m = (1 - 0.9) * g, v = (1 - 0.999) * g * g;
  const double mhat = m / (1 - 0.9), vhat = v / (1 - 0.999);
  const double want = 1.0 - 0.01 * mhat / (std::sqrt(vhat) + 1e-8);
  EXPECT_DOUBLE_EQ(theta.value[0], want);
  EXPECT_NEAR(theta.value[0] - 1.0, 0.01, 1e-8);
}

TEST(AdamTest, NonFiniteUpdateLeavesParametersUntouched) {
  ParameterStore store;
  Parameter& p = store.Add("p", Array::Vector({1.0, 2.0}));
  p.grad[1] = std::nan("");
  AdamState adam;
  EXPECT_THROW(adam.Update(store, 0.1), NumericError);
  EXPECT_EQ(p.value, Array::Vector({1.0, 2.0}));
}

TEST(AdamTest, FrozenColumnsStayPut) {
  ParameterStore store;
  Parameter& p = store.Add("table", Array({2, 3}));
  p.frozen_columns = {0};
  p.grad.Fill(1.0);
  AdamState adam;
  adam.Update(store, 0.1);
  EXPECT_EQ(p.value.at(0, 0), 0.0);
  EXPECT_EQ(p.value.at(1, 0), 0.0);
  EXPECT_NE(p.value.at(0, 1), 0.0);
}

TEST(JointObjectiveTest, TwoBagToyPassesGradCheck) {
  CoraModel model(testing::TinyModelConfig(), testing::kTinyVocab, 4);
  auto data = RandomExamples(2, 5);
  for (auto& e : data) e.sentences.resize(1), e.sentences.push_back(e.sentences[0]);
  const auto batch = Pointers(data);
  const auto report = CheckGradients(model.params(), [&](Graph& g) {
    return JointObjective(g, model, batch, true);
  });
  EXPECT_TRUE(report.passed) << report.ToString();
  EXPECT_LT(report.max_relative_error(), 1e-3);
}

TEST(JointStepTest, ReportsComponentsAndNoAuxDropsAttention) {
  TrainConfig config;
  config.learning_rate = 0.01;
  const auto data = RandomExamples(8, 6);
  const auto batch = Pointers(data);
  {
    CoraModel model(testing::TinyModelConfig(), testing::kTinyVocab, 7);
    AdamState adam;
    const auto m = JointStep(model, batch, config, adam, nullptr);
    EXPECT_GT(m.loss_att, 0.0);
    EXPECT_DOUBLE_EQ(m.loss, m.loss_re + m.loss_att);
    EXPECT_EQ(adam.step(), 1u);
  }
  config.ablations.no_aux_obj = true;
  CoraModel model(testing::TinyModelConfig(), testing::kTinyVocab, 7);
  AdamState adam;
  for (int i = 0; i < 5; ++i) {
    const auto m = JointStep(model, batch, config, adam, nullptr);
    EXPECT_EQ(m.loss, m.loss_re);
    EXPECT_EQ(m.loss_att, 0.0);
  }
}

TEST(JointStepTest, WeightDecayIsNotReportedInLoss) {
  TrainConfig config;
  config.weight_decay = 0.5;
  const auto data = RandomExamples(4, 8);
  const auto batch = Pointers(data);
  CoraModel model(testing::TinyModelConfig(), testing::kTinyVocab, 9);
  const auto before = EvaluateLoss(model, batch, true);
  AdamState adam;
  const auto m = JointStep(model, batch, config, adam, nullptr);
  EXPECT_DOUBLE_EQ(m.loss, before.loss);
}

TEST(JointStepTest, EmptyBatchIsInputError) {
  CoraModel model(testing::TinyModelConfig(), testing::kTinyVocab, 9);
  AdamState adam;
  EXPECT_THROW(JointStep(model, {}, TrainConfig{}, adam, nullptr), InputError);
}

TEST(JointStepTest, SameSeedSameTrajectory) {
  TrainConfig config;
  config.learning_rate = 0.01;
  config.dropout_p = 0.5;
  const auto data = RandomExamples(6, 10);
  const auto batch = Pointers(data);
  ModelConfig mc = testing::TinyModelConfig();
  mc.dropout_p = 0.5;
  CoraModel a(mc, testing::kTinyVocab, 11), b(mc, testing::kTinyVocab, 11);
  AdamState adam_a, adam_b;
  for (std::uint64_t step = 0; step < 10; ++step) {
    Rng da(SubSeed(1, "dropout", step)), db(SubSeed(1, "dropout", step));
    const auto ma = JointStep(a, batch, config, adam_a, &da);
    const auto mb = JointStep(b, batch, config, adam_b, &db);
    EXPECT_EQ(ma.loss, mb.loss);
  }
  for (const auto& [name, p] : a.params()) EXPECT_EQ(p.value, b.params().Get(name).value) << name;
}

TEST(TrainTest, EmptyDatasetIsInputError) {
  CoraModel model(testing::TinyModelConfig(), testing::kTinyVocab, 1);
  TrainProgress progress;
  EXPECT_THROW(Train(model, {}, TrainConfig{}, progress), InputError);
}

TEST(TrainTest, ResumeReproducesUninterruptedRun) {
  TrainConfig config;
  config.learning_rate = 0.01;
  config.batch_size = 4;
  config.dropout_p = 0.5;
  config.epochs = 4;
  ModelConfig mc = testing::TinyModelConfig();
  mc.dropout_p = 0.5;
  const auto data = RandomExamples(10, 12);

  CoraModel full(mc, testing::kTinyVocab, 13);
  TrainProgress full_progress;
  std::optional<CoraModel> snapshot;
  std::optional<TrainProgress> snapshot_progress;
  Train(full, data, config, full_progress, nullptr,
        [&](std::size_t epoch, double, const TrainProgress& progress) {
          if (epoch == 1) {
            snapshot.emplace(full);
            snapshot_progress = progress;
          }
        });
  ASSERT_TRUE(snapshot.has_value());
  EXPECT_EQ(snapshot_progress->epoch, 2u);

  Train(*snapshot, data, config, *snapshot_progress);
  EXPECT_EQ(snapshot_progress->adam.step(), full_progress.adam.step());
  for (const auto& [name, p] : full.params()) {
    EXPECT_EQ(p.value, snapshot->params().Get(name).value) << name;
  }
}

TEST(TrainTest, SyntheticLossDecreasesOverFirstEpochs) {
  SynthConfig synth;
  synth.train_bags = 200;
  synth.test_bags = 1;
  synth.seed = 14;
  const SynthCorpus corpus = GenerateSynthetic(synth);
  const RelationHierarchy hierarchy(corpus.ranked_relations, synth.depth());
  const Vocab vocab = BuildVocab(corpus.train);
  const auto bags = BuildBags(corpus.train, BagGrouping::kPairRelation, hierarchy);
  const auto data = MakeExamples(bags, corpus.train, vocab);

  ModelConfig mc;
  mc.embedding.word_dim = 8;
  mc.embedding.position_dim = 2;
  mc.embedding.max_distance = 10;
  mc.encoder.channels = 8;
  mc.level_sizes = hierarchy.level_sizes();
  CoraModel model(mc, vocab.size(), 15);

  TrainConfig config;
  config.learning_rate = 0.01;
  config.batch_size = 20;
  config.epochs = 30;
  config.seed = 15;
  TrainProgress progress;
  std::vector<double> epoch_loss;
  std::vector<double> step_loss;
  Train(
      model, data, config, progress,
      [&](const StepMetrics& m) { step_loss.push_back(m.loss); },
      [&](std::size_t, double mean, const TrainProgress&) { epoch_loss.push_back(mean); });
  ASSERT_EQ(epoch_loss.size(), 30u);
  for (std::size_t e = 1; e < 5; ++e) {
    EXPECT_LT(epoch_loss[e], epoch_loss[e - 1]) << "epoch " << e;
  }
  EXPECT_LT(epoch_loss.back(), epoch_loss.front());
  for (double l : step_loss) EXPECT_TRUE(std::isfinite(l));
}

}  // namespace
}  // namespace cora
