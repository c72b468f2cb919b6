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

#include "cora/metrics.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "cora/errors.h"

namespace cora {
namespace {

bool IsGold(const PredictionRecord& p, std::size_t relation) {
  return std::binary_search(p.gold.begin(), p.gold.end(), relation);
}

std::string FormatDouble(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::string> Split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) {
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

}  // namespace

std::vector<ScoredPair> RankPairs(const std::vector<PredictionRecord>& preds) {
  std::vector<ScoredPair> pairs;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    const auto& p = preds[i];
    for (std::size_t rel = 1; rel < p.scores.size(); ++rel) {
      if (!std::isfinite(p.scores[rel])) {
        throw InputError("non-finite score for bag " + p.bag_key);
      }
      pairs.push_back({i, rel, p.scores[rel], IsGold(p, rel)});
    }
  }
  std::sort(pairs.begin(), pairs.end(), [&](const ScoredPair& a, const ScoredPair& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.relation != b.relation) return a.relation < b.relation;
    return preds[a.record].bag_key < preds[b.record].bag_key;
  });
  return pairs;
}

std::size_t CountGoldFacts(const std::vector<PredictionRecord>& preds) {
  std::size_t n = 0;
  for (const auto& p : preds) {
    for (std::size_t g : p.gold) {
      if (g != 0) ++n;
    }
  }
  return n;
}

double PrecisionAtN(const std::vector<PredictionRecord>& preds, std::size_t n) {
  const auto pairs = RankPairs(preds);
  if (n == 0 || n > pairs.size()) {
    throw InputError("P@" + std::to_string(n) + " needs that many scored pairs, have " +
                     std::to_string(pairs.size()));
  }
  std::size_t hits = 0;
  for (std::size_t i = 0; i < n; ++i) hits += pairs[i].correct ? 1 : 0;
  return 100.0 * static_cast<double>(hits) / static_cast<double>(n);
}

Retention ParseRetention(const std::string& name) {
  if (name == "one") return Retention::kOne;
  if (name == "two") return Retention::kTwo;
  if (name == "all") return Retention::kAll;
  throw ConfigError("unknown retention '" + name + "' (one, two, all)");
}

std::string RetentionName(Retention r) {
  switch (r) {
    case Retention::kOne: return "one";
    case Retention::kTwo: return "two";
    case Retention::kAll: return "all";
  }
  return "all";
}

std::vector<std::size_t> RetainSentences(std::size_t bag_size, Retention retention, Rng& rng) {
  std::vector<std::size_t> idx(bag_size);
  for (std::size_t i = 0; i < bag_size; ++i) idx[i] = i;
  const std::size_t keep = retention == Retention::kOne   ? 1
                           : retention == Retention::kTwo ? 2
                                                          : bag_size;
  if (keep >= bag_size) return idx;
  rng.Shuffle(idx);
  idx.resize(keep);
  std::sort(idx.begin(), idx.end());
  return idx;
}

PrCurve PrecisionRecallCurve(const std::vector<PredictionRecord>& preds) {
  const std::size_t gold = CountGoldFacts(preds);
  if (gold == 0) throw InputError("precision-recall curve needs at least one gold fact");
  const auto pairs = RankPairs(preds);
  PrCurve curve;
  curve.points.push_back({1.0, 0.0});
  std::size_t hits = 0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    hits += pairs[i].correct ? 1 : 0;
    curve.points.push_back({static_cast<double>(hits) / static_cast<double>(i + 1),
                            static_cast<double>(hits) / static_cast<double>(gold)});
  }
  for (std::size_t i = 1; i < curve.points.size(); ++i) {
    const auto& a = curve.points[i - 1];
    const auto& b = curve.points[i];
    curve.auc += (b.recall - a.recall) * (a.precision + b.precision) / 2.0;
  }
  return curve;
}

double HitsAtKMacro(const std::vector<PredictionRecord>& preds,
                    const std::vector<std::size_t>& train_counts, std::size_t threshold,
                    std::size_t k) {
  // relation -> (bags, hits)
  std::map<std::size_t, std::pair<std::size_t, std::size_t>> per_relation;
  for (const auto& p : preds) {
    for (std::size_t g : p.gold) {
      if (g == 0) continue;
      if (g >= train_counts.size() || g >= p.scores.size()) {
        throw InputError("gold relation " + std::to_string(g) + " of bag " + p.bag_key +
                         " has no training count or score");
      }
      if (train_counts[g] >= threshold) continue;
      std::size_t rank = 1;
      for (std::size_t rel = 1; rel < p.scores.size(); ++rel) {
        if (rel == g) continue;
        if (p.scores[rel] > p.scores[g] || (p.scores[rel] == p.scores[g] && rel < g)) ++rank;
      }
      auto& [bags, hits] = per_relation[g];
      ++bags;
      if (rank <= k) ++hits;
    }
  }
  if (per_relation.empty()) {
    throw InputError("no test bag has a gold relation with fewer than " +
                     std::to_string(threshold) + " training instances");
  }
  double total = 0.0;
  for (const auto& [rel, counts] : per_relation) {
    total += 100.0 * static_cast<double>(counts.second) / static_cast<double>(counts.first);
  }
  return total / static_cast<double>(per_relation.size());
}

std::vector<LevelAttentionStats> AttentionDiagnostics(const std::vector<PredictionRecord>& preds,
                                                      std::size_t bins) {
  if (bins == 0) throw ConfigError("attention histogram needs at least one bin");
  std::vector<LevelAttentionStats> stats;
  for (const auto& p : preds) {
    if (p.alphas.empty() || p.alphas.size() != p.sentence_labels.size()) {
      throw ConfigError("attention diagnostics need retained alphas for bag " + p.bag_key);
    }
    for (std::size_t s = 0; s < p.alphas.size(); ++s) {
      const auto& levels = p.alphas[s];
      if (stats.empty()) {
        for (std::size_t l = 0; l < levels.size(); ++l) {
          LevelAttentionStats st;
          st.level = l;
          for (std::size_t b = 0; b < bins; ++b) {
            st.bins.push_back({static_cast<double>(b) / static_cast<double>(bins),
                               static_cast<double>(b + 1) / static_cast<double>(bins), 0, 0});
          }
          stats.push_back(std::move(st));
        }
      }
      if (levels.size() != stats.size() || p.sentence_labels[s].size() != stats.size()) {
        throw ConfigError("inconsistent attention levels in bag " + p.bag_key);
      }
      for (std::size_t l = 0; l < levels.size(); ++l) {
        const auto& alpha = levels[l];
        const auto best = static_cast<std::size_t>(
            std::max_element(alpha.begin(), alpha.end()) - alpha.begin());
        const double mx = alpha[best];
        const bool hit = best == p.sentence_labels[s][l];
        std::size_t bin = static_cast<std::size_t>(mx * static_cast<double>(bins));
        if (bin >= bins) bin = bins - 1;
        auto& st = stats[l];
        ++st.bins[bin].count;
        st.bins[bin].correct += hit ? 1 : 0;
        ++st.sentences;
        st.correct += hit ? 1 : 0;
        st.mean_max += mx;
      }
    }
  }
  for (auto& st : stats) {
    if (st.sentences > 0) st.mean_max /= static_cast<double>(st.sentences);
  }
  return stats;
}

std::vector<PredictionRecord> PredictFromAttention(const std::vector<PredictionRecord>& preds,
                                                   AttentionScoring mode,
                                                   const RelationHierarchy* hierarchy) {
  if (mode == AttentionScoring::kProduct && hierarchy == nullptr) {
    throw ConfigError("product attention scoring needs the relation hierarchy");
  }
  std::vector<PredictionRecord> out;
  out.reserve(preds.size());
  for (const auto& p : preds) {
    if (p.alphas.empty()) {
      throw ConfigError("attention scoring needs retained alphas for bag " + p.bag_key);
    }
    const std::size_t levels = p.alphas[0].size();
    // Bag-level alpha per level: mean over sentences.
    std::vector<std::vector<double>> mean(levels);
    for (std::size_t l = 0; l < levels; ++l) {
      mean[l].assign(p.alphas[0][l].size(), 0.0);
      for (const auto& sentence : p.alphas) {
        for (std::size_t r = 0; r < mean[l].size(); ++r) mean[l][r] += sentence[l][r];
      }
      for (double& v : mean[l]) v /= static_cast<double>(p.alphas.size());
    }
    PredictionRecord q = p;
    q.scores = mean[0];
    if (mode == AttentionScoring::kProduct) {
      if (hierarchy->num_levels() != levels) {
        throw ConfigError("hierarchy depth does not match retained attention levels");
      }
      for (std::size_t r = 0; r < q.scores.size(); ++r) {
        for (std::size_t l = 1; l < levels; ++l) {
          q.scores[r] *= mean[l][hierarchy->Ancestor(l, r)];
        }
      }
    }
    out.push_back(std::move(q));
  }
  return out;
}

void WritePredictions(std::ostream& out, const std::vector<PredictionRecord>& preds) {
  for (const auto& p : preds) {
    out << p.bag_key << '\t';
    for (std::size_t i = 0; i < p.gold.size(); ++i) out << (i ? "," : "") << p.gold[i];
    out << '\t';
    for (std::size_t r = 0; r < p.scores.size(); ++r) {
      out << (r ? "," : "") << r << ':' << FormatDouble(p.scores[r]);
    }
    out << '\n';
  }
}

std::vector<PredictionRecord> ReadPredictions(std::istream& in) {
  std::vector<PredictionRecord> preds;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty() || line[0] == '#') continue;
    const auto fields = Split(line, '\t');
    if (fields.size() != 3) {
      throw InputError("prediction line " + std::to_string(line_number) +
                       ": expected 3 tab-separated fields");
    }
    PredictionRecord p;
    p.bag_key = fields[0];
    for (const auto& g : Split(fields[1], ',')) p.gold.push_back(std::stoul(g));
    for (const auto& item : Split(fields[2], ',')) {
      const auto colon = item.find(':');
      if (colon == std::string::npos) {
        throw InputError("prediction line " + std::to_string(line_number) +
                         ": score entries are id:score");
      }
      const std::size_t rel = std::stoul(item.substr(0, colon));
      if (rel >= p.scores.size()) p.scores.resize(rel + 1, 0.0);
      p.scores[rel] = std::stod(item.substr(colon + 1));
    }
    std::sort(p.gold.begin(), p.gold.end());
    preds.push_back(std::move(p));
  }
  return preds;
}

void WriteCurve(std::ostream& out, const PrCurve& curve) {
  out << "recall\tprecision\n";
  for (const auto& pt : curve.points) {
    out << FormatDouble(pt.recall) << '\t' << FormatDouble(pt.precision) << '\n';
  }
}

void WriteHistogram(std::ostream& out, const std::vector<LevelAttentionStats>& stats) {
  out << "level\tbin_lo\tbin_hi\tcount\taccuracy\n";
  for (const auto& st : stats) {
    for (const auto& b : st.bins) {
      out << st.level << '\t' << FormatDouble(b.lo) << '\t' << FormatDouble(b.hi) << '\t'
          << b.count << '\t' << FormatDouble(b.accuracy()) << '\n';
    }
  }
}

}  // namespace cora
