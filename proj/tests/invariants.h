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

#ifndef CORA_TESTS_INVARIANTS_H_
#define CORA_TESTS_INVARIANTS_H_

// Randomized invariant checks shared by property_test and the acceptance
// binary. Each check runs `cases` independent draws and reports the first
// violation it sees.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "cora/embedding.h"
#include "cora/graph.h"
#include "cora/hierarchy.h"
#include "cora/model.h"
#include "cora/ops.h"
#include "cora/rng.h"
#include "test_util.h"

namespace cora::testing {

inline constexpr std::size_t kInvariantCases = 1000;

struct InvariantReport {
  std::string name;
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::string first_failure;

  bool ok() const { return cases >= kInvariantCases && failures == 0; }
  void Fail(std::size_t c, const std::string& what) {
    if (failures++ == 0) first_failure = "case " + std::to_string(c) + ": " + what;
  }
};

inline InvariantReport CheckSoftmaxNormalization(std::uint64_t seed,
                                                 std::size_t cases = kInvariantCases) {
  InvariantReport rep{"softmax normalization"};
  Rng rng(seed);
  for (std::size_t c = 0; c < cases; ++c, ++rep.cases) {
    const std::size_t n = 1 + rng.Index(40);
    // Scales up to 1e3 push exp() far past overflow without the max shift.
    const double scale = std::pow(10.0, rng.Uniform(-2.0, 3.0));
    const double shift = rng.Uniform(-500.0, 500.0);
    const Array x = RandomArray(rng, {n}, shift - scale, shift + scale);
    Graph g;
    const Array via_graph = g.value(Softmax(g, g.Constant(x)));
    for (const Array& p : {Softmax(x), via_graph}) {
      double sum = 0.0;
      for (double v : p.values()) {
        if (!(v >= 0.0 && v <= 1.0)) rep.Fail(c, "entry outside [0, 1]");
        sum += v;
      }
      if (!(std::fabs(sum - 1.0) <= 1e-12)) {
        std::ostringstream msg;
        msg << "sum " << sum << " for n=" << n;
        rep.Fail(c, msg.str());
      }
    }
  }
  return rep;
}

inline InvariantReport CheckGateRange(std::uint64_t seed, std::size_t cases = kInvariantCases) {
  InvariantReport rep{"gate range"};
  Rng rng(seed);
  EmbeddingDims dims;
  dims.word_dim = 3;
  dims.position_dim = 2;
  dims.max_distance = 6;
  const std::size_t vocab = 10;
  for (std::size_t c = 0; c < cases; ++c, ++rep.cases) {
    ParameterStore store;
    Rng init(rng.Index(1u << 30));
    EmbeddingParams params = EmbeddingParams::Create(store, dims, vocab, true, init);
    // Gate weights up to 1e3 so some gates sit deep in saturation.
    const double gate_scale = std::pow(10.0, rng.Uniform(-1.0, 3.0));
    for (double& v : params.gate_w->value.values()) v = rng.Uniform(-gate_scale, gate_scale);
    for (double& v : params.gate_b->value.values()) v = rng.Uniform(-gate_scale, gate_scale);
    const double lambda = rng.Uniform(0.01, 1.0);
    Graph g;
    const SentenceInput s = RandomSentence(rng, 2 + rng.Index(10), vocab);
    const EmbeddingTrace t = EmbedSentence(g, s, params, dims, lambda);
    const Array& a = g.value(t.gate);
    const Array& xe = g.value(t.entity_aware);
    const Array& proj = g.value(t.projected);
    const Array& x = g.value(t.fused);
    for (std::size_t i = 0; i < a.size(); ++i) {
      // Saturation rounds to the closed interval in double precision.
      if (!(a[i] >= 0.0 && a[i] <= 1.0)) rep.Fail(c, "gate outside [0, 1]");
      const double lo = std::min(xe[i], proj[i]);
      const double hi = std::max(xe[i], proj[i]);
      const double tol = 1e-12 * std::max(1.0, hi - lo);
      if (!(x[i] >= lo - tol && x[i] <= hi + tol)) {
        std::ostringstream msg;
        msg << "fused " << x[i] << " outside [" << lo << ", " << hi << "]";
        rep.Fail(c, msg.str());
      }
    }
  }
  return rep;
}

// A tiny model whose parameters are scattered far from initialization.
inline CoraModel PerturbedTinyModel(Rng& rng, std::size_t levels) {
  CoraModel model(TinyModelConfig(levels), kTinyVocab, rng.Index(1u << 30));
  const double scale = rng.Uniform(0.1, 3.0);
  for (auto& [name, p] : model.params()) {
    for (std::size_t i = 0; i < p.value.size(); ++i) {
      const std::size_t col = i % p.value.cols();
      if (std::find(p.frozen_columns.begin(), p.frozen_columns.end(), col) !=
          p.frozen_columns.end()) {
        continue;
      }
      p.value[i] += rng.Uniform(-scale, scale);
    }
  }
  return model;
}

inline BagInput RandomBag(Rng& rng, std::size_t max_sentences) {
  BagInput bag;
  const std::size_t m = 1 + rng.Index(max_sentences);
  for (std::size_t i = 0; i < m; ++i) bag.push_back(RandomSentence(rng, 2 + rng.Index(9), kTinyVocab));
  return bag;
}

inline void CheckDistribution(InvariantReport& rep, std::size_t c, const Array& p,
                              const std::string& what) {
  double sum = 0.0;
  for (double v : p.values()) {
    if (!(v >= 0.0 && v <= 1.0)) rep.Fail(c, what + " entry outside [0, 1]");
    sum += v;
  }
  if (!(std::fabs(sum - 1.0) <= 1e-12)) rep.Fail(c, what + " does not sum to 1");
}

// Attention-pooling weights and every sent2rel score vector are convex
// weights, and the pooled bag vector lies in the hull of the sentence
// vectors.
inline InvariantReport CheckConvexPooling(std::uint64_t seed,
                                          std::size_t cases = kInvariantCases) {
  InvariantReport rep{"convex-combination pooling"};
  Rng rng(seed);
  constexpr std::size_t kBagsPerModel = 20;
  for (std::size_t c = 0; c < cases;) {
    const CoraModel model = PerturbedTinyModel(rng, 1 + rng.Index(3));
    for (std::size_t b = 0; b < kBagsPerModel && c < cases; ++b, ++c, ++rep.cases) {
      const BagInput bag = RandomBag(rng, 6);
      Graph g;
      const BagForward fwd = model.Forward(g, bag);
      const Array& w = g.value(fwd.pool_weights);
      if (w.size() != bag.size()) rep.Fail(c, "pool weight count");
      CheckDistribution(rep, c, w, "pool weights");
      CheckDistribution(rep, c, g.value(fwd.probs), "bag distribution");
      for (const auto& levels : fwd.alphas) {
        for (Var a : levels) CheckDistribution(rep, c, g.value(a), "sent2rel scores");
      }
      // Recombine u_j with the weights and check each coordinate of the
      // result against the per-coordinate hull.
      const std::size_t d = g.value(fwd.augmented[0]).size();
      for (std::size_t k = 0; k < d; ++k) {
        double lo = INFINITY, hi = -INFINITY, mix = 0.0;
        for (std::size_t j = 0; j < bag.size(); ++j) {
          const double u = g.value(fwd.augmented[j])[k];
          lo = std::min(lo, u);
          hi = std::max(hi, u);
          mix += w[j] * u;
        }
        const double tol = 1e-12 * std::max(1.0, std::fabs(hi) + std::fabs(lo));
        if (!(mix >= lo - tol && mix <= hi + tol)) rep.Fail(c, "pooled vector outside hull");
      }
    }
  }
  return rep;
}

inline InvariantReport CheckPermutationInvariance(std::uint64_t seed,
                                                  std::size_t cases = kInvariantCases) {
  InvariantReport rep{"permutation invariance of bag prediction"};
  Rng rng(seed);
  constexpr std::size_t kBagsPerModel = 20;
  for (std::size_t c = 0; c < cases;) {
    const CoraModel model = PerturbedTinyModel(rng, 1 + rng.Index(3));
    for (std::size_t b = 0; b < kBagsPerModel && c < cases; ++b, ++c, ++rep.cases) {
      const BagInput bag = RandomBag(rng, 7);
      std::vector<std::size_t> order(bag.size());
      std::iota(order.begin(), order.end(), 0);
      rng.Shuffle(order);
      BagInput permuted;
      for (std::size_t i : order) permuted.push_back(bag[i]);
      const BagPrediction p = model.Predict(bag);
      const BagPrediction q = model.Predict(permuted);
      for (std::size_t r = 0; r < p.probs.size(); ++r) {
        // Summation order changes, so equality holds up to rounding.
        if (!(std::fabs(p.probs[r] - q.probs[r]) <= 1e-12)) {
          std::ostringstream msg;
          msg << "prob " << r << " moved by " << std::fabs(p.probs[r] - q.probs[r]);
          rep.Fail(c, msg.str());
        }
      }
      for (std::size_t j = 0; j < order.size(); ++j) {
        if (!(std::fabs(q.pool_weights[j] - p.pool_weights[order[j]]) <= 1e-12)) {
          rep.Fail(c, "pool weights do not follow their sentences");
        }
        if (q.alphas[j] != p.alphas[order[j]]) {
          rep.Fail(c, "sent2rel scores depend on sentence position");
        }
      }
    }
  }
  return rep;
}

// Random relation path with `parts` components drawn from a small alphabet
// so that siblings and shared prefixes are common.
inline std::string RandomRelationPath(Rng& rng, std::size_t parts) {
  static const char* kNames[] = {"a", "b", "c", "dd", "e_f"};
  std::string path;
  for (std::size_t i = 0; i < parts; ++i) path += std::string("/") + kNames[rng.Index(5)];
  return path;
}

inline InvariantReport CheckHierarchyPrefixConsistency(std::uint64_t seed,
                                                       std::size_t cases = kInvariantCases) {
  InvariantReport rep{"hierarchy prefix consistency"};
  Rng rng(seed);
  for (std::size_t c = 0; c < cases; ++c, ++rep.cases) {
    const std::size_t depth = rng.Index(4);
    std::vector<std::string> relations;
    const std::size_t n = 1 + rng.Index(12);
    for (std::size_t i = 0; i < n; ++i) {
      relations.push_back(RandomRelationPath(rng, depth + 1 + rng.Index(2)));
    }
    if (rng.Bernoulli(0.5)) relations.push_back(kNaRelation);
    const RelationHierarchy h(relations, depth);
    if (h.num_levels() != depth + 1) rep.Fail(c, "level count");
    for (std::size_t l = 0; l <= depth; ++l) {
      if (h.Name(l, 0) != kNaRelation) rep.Fail(c, "NA is not id 0");
      if (h.Ancestor(l, 0) != 0) rep.Fail(c, "NA ancestor");
    }
    for (std::size_t fine = 1; fine < h.size(0); ++fine) {
      const std::string& name = h.Name(0, fine);
      const std::vector<std::size_t> labels = h.Labels(name);
      const std::vector<std::string> path = DeriveHierarchy(name, depth);
      if (labels.size() != depth + 1 || labels[0] != fine) rep.Fail(c, "labels of " + name);
      for (std::size_t l = 1; l <= depth; ++l) {
        const std::string& parent = h.Name(l, h.Ancestor(l, fine));
        const std::string& child = l == 1 ? name : h.Name(l - 1, h.Ancestor(l - 1, fine));
        // The ancestor is the child with exactly its last component removed.
        const bool prefix = child.size() > parent.size() &&
                            child.compare(0, parent.size(), parent) == 0 &&
                            child[parent.size()] == '/' &&
                            child.find('/', parent.size() + 1) == std::string::npos;
        if (!prefix) rep.Fail(c, "'" + parent + "' is not the parent path of '" + child + "'");
        if (labels[l] != h.Ancestor(l, fine) || path[l] != parent) {
          rep.Fail(c, "level " + std::to_string(l) + " label mismatch for " + name);
        }
      }
    }
    // Relations that share a level-l ancestor share every coarser one.
    for (std::size_t x = 1; x < h.size(0); ++x) {
      for (std::size_t y = x + 1; y < h.size(0); ++y) {
        for (std::size_t l = 0; l < depth; ++l) {
          if (h.Ancestor(l, x) == h.Ancestor(l, y) && h.Ancestor(l + 1, x) != h.Ancestor(l + 1, y)) {
            rep.Fail(c, "ancestor chains diverge above a shared node");
          }
        }
      }
    }
  }
  return rep;
}

}  // namespace cora::testing

#endif  // CORA_TESTS_INVARIANTS_H_
