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

#ifndef CORA_TRAINING_H_
#define CORA_TRAINING_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "cora/corpus.h"
#include "cora/embedding.h"
#include "cora/graph.h"
#include "cora/model.h"
#include "cora/parameters.h"
#include "cora/rng.h"

namespace cora {

struct TrainConfig {
  double learning_rate = 0.1;
  std::size_t batch_size = 160;
  double dropout_p = 0.5;
  double weight_decay = 1e-5;
  double lambda = 0.05;
  std::size_t epochs = 10;
  std::uint64_t seed = 1;
  std::size_t m_levels = 2;
  Ablations ablations;

  void Validate() const;
};

// One training bag: its sentences and the labels r0..rM shared by all of
// them under distant supervision.
struct TrainingExample {
  std::string key;
  BagInput sentences;
  std::vector<std::size_t> labels;
};

std::vector<TrainingExample> MakeExamples(const std::vector<Bag>& bags,
                                          const std::vector<SentenceRecord>& records,
                                          const Vocab& vocab);

// Mean over bags of -log p[label]. Labels at or below the clamp are counted
// in `clamp_count`.
Var LossRe(Graph& g, std::span<const Var> probs, std::span<const std::size_t> labels,
           int* clamp_count = nullptr);

// Mean over every (bag, sentence, level) of -log alpha_l[r_l].
// alphas[bag][sentence][level], labels[bag][level]. Throws InputError for a
// label outside its level.
Var LossAtt(Graph& g, const std::vector<std::vector<std::vector<Var>>>& alphas,
            const std::vector<std::vector<std::size_t>>& labels, int* clamp_count = nullptr);

// Adam moments keyed by parameter name.
class AdamState {
 public:
  static constexpr double kBeta1 = 0.9;
  static constexpr double kBeta2 = 0.999;
  static constexpr double kEpsilon = 1e-8;

  std::uint64_t step() const { return step_; }
  // Applies one bias-corrected update from the current gradients. Throws
  // NumericError, leaving parameters untouched, if any result is non-finite.
  void Update(ParameterStore& params, double learning_rate);

  const std::map<std::string, std::pair<Array, Array>>& moments() const { return moments_; }
  void Restore(std::uint64_t step, std::map<std::string, std::pair<Array, Array>> moments);

 private:
  std::uint64_t step_ = 0;
  std::map<std::string, std::pair<Array, Array>> moments_;  // name -> (m, v)
};

struct StepMetrics {
  std::uint64_t step = 0;
  double loss = 0.0;     // L_re + L_att
  double loss_re = 0.0;
  double loss_att = 0.0;
  int clamped = 0;
};

// L = L_re + L_att (L_att only when `with_aux` and the model has
// sent2rel attention) over a batch, recorded on `g`.
Var JointObjective(Graph& g, const CoraModel& model,
                   std::span<const TrainingExample* const> batch, bool with_aux,
                   Rng* dropout = nullptr);

// Forward, backward and one Adam update on a batch. The optimized objective
// adds 0.5 * weight_decay * |theta|^2; the reported loss does not. A
// non-finite loss throws NumericError naming the offending bags before any
// parameter changes. A null `dropout` disables dropout.
StepMetrics JointStep(CoraModel& model, std::span<const TrainingExample* const> batch,
                      const TrainConfig& config, AdamState& adam, Rng* dropout);

// Loss terms on a batch without updating anything (dropout off).
StepMetrics EvaluateLoss(const CoraModel& model, std::span<const TrainingExample* const> batch,
                         bool with_aux);

struct TrainProgress {
  std::size_t epoch = 0;  // epochs completed
  AdamState adam;
};

using StepCallback = std::function<void(const StepMetrics&)>;
using EpochCallback = std::function<void(std::size_t epoch, double mean_loss,
                                         const TrainProgress& progress)>;

// Runs epochs progress.epoch .. config.epochs - 1. Each epoch shuffles the
// bags with a sub-seed of (seed, epoch) and each step draws dropout from a
// sub-seed of (seed, step), so a run resumed from a saved TrainProgress
// follows the uninterrupted trajectory exactly.
void Train(CoraModel& model, const std::vector<TrainingExample>& data, const TrainConfig& config,
           TrainProgress& progress, const StepCallback& on_step = nullptr,
           const EpochCallback& on_epoch = nullptr);

}  // namespace cora

#endif  // CORA_TRAINING_H_
