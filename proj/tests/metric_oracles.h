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

#ifndef CORA_TESTS_METRIC_ORACLES_H_
#define CORA_TESTS_METRIC_ORACLES_H_

// Brute-force reimplementations of the ranking metrics. They share no code
// with metrics.cc: ranks come from pairwise comparison counts rather than a
// sort, and every quantity is recounted from scratch.

#include <algorithm>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "cora/metrics.h"
#include "cora/rng.h"

namespace cora::testing {

struct OraclePair {
  std::size_t record;
  std::size_t relation;
  double score;
  bool gold;
};

inline std::vector<OraclePair> OraclePairs(const std::vector<PredictionRecord>& preds) {
  std::vector<OraclePair> pairs;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    for (std::size_t r = 1; r < preds[i].scores.size(); ++r) {
      bool gold = false;
      for (std::size_t g : preds[i].gold) gold = gold || g == r;
      pairs.push_back({i, r, preds[i].scores[r], gold});
    }
  }
  return pairs;
}

// Position of every pair in the descending order, by counting the pairs that
// must precede it.
inline std::vector<std::size_t> OraclePositions(const std::vector<PredictionRecord>& preds,
                                                const std::vector<OraclePair>& pairs) {
  std::vector<std::size_t> pos(pairs.size(), 0);
  for (std::size_t a = 0; a < pairs.size(); ++a) {
    for (std::size_t b = 0; b < pairs.size(); ++b) {
      if (a == b) continue;
      const auto& x = pairs[b];
      const auto& y = pairs[a];
      const bool ahead =
          x.score > y.score ||
          (x.score == y.score &&
           (x.relation < y.relation ||
            (x.relation == y.relation && preds[x.record].bag_key < preds[y.record].bag_key)));
      if (ahead) ++pos[a];
    }
  }
  return pos;
}

inline double OraclePrecisionAtN(const std::vector<PredictionRecord>& preds, std::size_t n) {
  const auto pairs = OraclePairs(preds);
  const auto pos = OraclePositions(preds, pairs);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (pos[i] < n && pairs[i].gold) ++hits;
  }
  return 100.0 * static_cast<double>(hits) / static_cast<double>(n);
}

inline double OracleAuc(const std::vector<PredictionRecord>& preds) {
  const auto pairs = OraclePairs(preds);
  const auto pos = OraclePositions(preds, pairs);
  std::vector<bool> gold_at(pairs.size(), false);
  for (std::size_t i = 0; i < pairs.size(); ++i) gold_at[pos[i]] = pairs[i].gold;
  std::size_t total_gold = 0;
  for (const auto& p : preds) {
    for (std::size_t g : p.gold) total_gold += g != 0 ? 1 : 0;
  }
  double area = 0.0, prev_recall = 0.0, prev_precision = 1.0;
  std::size_t hits = 0;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    if (gold_at[k]) ++hits;
    const double recall = static_cast<double>(hits) / static_cast<double>(total_gold);
    const double precision = static_cast<double>(hits) / static_cast<double>(k + 1);
    area += 0.5 * (recall - prev_recall) * (precision + prev_precision);
    prev_recall = recall;
    prev_precision = precision;
  }
  return area;
}

inline double OracleHitsAtK(const std::vector<PredictionRecord>& preds,
                            const std::vector<std::size_t>& train_counts, std::size_t threshold,
                            std::size_t k) {
  std::map<std::size_t, std::vector<bool>> outcomes;
  for (const auto& p : preds) {
    for (std::size_t g : p.gold) {
      if (g == 0 || train_counts[g] >= threshold) continue;
      std::size_t ahead = 0;
      for (std::size_t r = 1; r < p.scores.size(); ++r) {
        if (r != g && (p.scores[r] > p.scores[g] || (p.scores[r] == p.scores[g] && r < g))) {
          ++ahead;
        }
      }
      outcomes[g].push_back(ahead < k);
    }
  }
  double sum = 0.0;
  for (const auto& [rel, hits] : outcomes) {
    double n = 0.0;
    for (bool h : hits) n += h ? 1.0 : 0.0;
    sum += 100.0 * n / static_cast<double>(hits.size());
  }
  return sum / static_cast<double>(outcomes.size());
}

// Per-level percentage of sentences whose argmax alpha equals the label.
inline std::vector<double> OracleAttentionAccuracy(const std::vector<PredictionRecord>& preds) {
  std::vector<double> hits, total;
  for (const auto& p : preds) {
    for (std::size_t s = 0; s < p.alphas.size(); ++s) {
      for (std::size_t l = 0; l < p.alphas[s].size(); ++l) {
        if (hits.size() <= l) hits.resize(l + 1, 0.0), total.resize(l + 1, 0.0);
        const auto& a = p.alphas[s][l];
        std::size_t best = 0;
        for (std::size_t r = 1; r < a.size(); ++r) {
          if (a[r] > a[best]) best = r;
        }
        total[l] += 1.0;
        hits[l] += best == p.sentence_labels[s][l] ? 1.0 : 0.0;
      }
    }
  }
  std::vector<double> out;
  for (std::size_t l = 0; l < hits.size(); ++l) out.push_back(100.0 * hits[l] / total[l]);
  return out;
}

// Random records over `relations` fine ids (NA included) with 1-2 gold
// labels, coarse scores so that ties occur, and per-sentence alphas over
// level sizes {relations, 3}.
inline std::vector<PredictionRecord> RandomPredictions(std::size_t n, std::size_t relations,
                                                       std::uint64_t seed) {
  Rng rng(seed);
  std::vector<PredictionRecord> out;
  for (std::size_t i = 0; i < n; ++i) {
    PredictionRecord p;
    p.bag_key = "bag" + std::to_string(i);
    p.gold.push_back(rng.Index(relations));
    if (rng.Bernoulli(0.2)) {
      const std::size_t extra = 1 + rng.Index(relations - 1);
      if (extra != p.gold[0]) p.gold.push_back(extra);
    }
    std::sort(p.gold.begin(), p.gold.end());
    for (std::size_t r = 0; r < relations; ++r) {
      p.scores.push_back(static_cast<double>(rng.Index(50)) / 50.0);
    }
    const std::size_t sentences = 1 + rng.Index(3);
    for (std::size_t s = 0; s < sentences; ++s) {
      std::vector<std::vector<double>> levels;
      for (std::size_t size : {relations, std::size_t{3}}) {
        std::vector<double> a(size);
        double z = 0.0;
        for (double& v : a) z += (v = rng.Uniform() + 1e-3);
        for (double& v : a) v /= z;
        levels.push_back(std::move(a));
      }
      p.alphas.push_back(std::move(levels));
      p.sentence_labels.push_back({p.gold[0], rng.Index(3)});
    }
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace cora::testing

#endif  // CORA_TESTS_METRIC_ORACLES_H_
