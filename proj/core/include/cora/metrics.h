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

#ifndef CORA_METRICS_H_
#define CORA_METRICS_H_

#include <cstddef>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "cora/hierarchy.h"
#include "cora/rng.h"

namespace cora {

// Model output for one evaluation bag, the unit consumed by every metric.
struct PredictionRecord {
  std::string bag_key;
  // Fine-grained gold relation ids, ascending. NA is id 0.
  std::vector<std::size_t> gold;
  // Confidence per fine-grained relation id; the NA entry is never ranked.
  std::vector<double> scores;
  // Optional sent2rel diagnostics: alphas[sentence][level][relation] and
  // the sentence's own labels[sentence][level].
  std::vector<std::vector<std::vector<double>>> alphas;
  std::vector<std::vector<std::size_t>> sentence_labels;
};

struct ScoredPair {
  std::size_t record = 0;
  std::size_t relation = 0;
  double score = 0.0;
  bool correct = false;
};

// Every (bag, non-NA relation) pair sorted by descending score; ties go to
// the smaller relation id, then the smaller bag key.
std::vector<ScoredPair> RankPairs(const std::vector<PredictionRecord>& preds);

// Number of (bag, non-NA gold relation) facts.
std::size_t CountGoldFacts(const std::vector<PredictionRecord>& preds);

// Percentage of the top-n ranked pairs whose relation is a gold label of
// the bag.
double PrecisionAtN(const std::vector<PredictionRecord>& preds, std::size_t n);

enum class Retention { kOne, kTwo, kAll };
Retention ParseRetention(const std::string& name);
std::string RetentionName(Retention r);

// Sentence indices kept under a retention protocol, ascending. Bags with
// fewer sentences than the protocol keeps are returned whole.
std::vector<std::size_t> RetainSentences(std::size_t bag_size, Retention retention, Rng& rng);

struct CurvePoint {
  double precision = 0.0;
  double recall = 0.0;
};

struct PrCurve {
  // Starts at (recall 0, precision 1), then one point per ranked pair.
  std::vector<CurvePoint> points;
  double auc = 0.0;
};

// Precision/recall against the total gold fact count along the ranked
// pairs, with the area by trapezoidal integration over recall.
PrCurve PrecisionRecallCurve(const std::vector<PredictionRecord>& preds);

// Macro Hits@K over long-tail relations: for each gold relation whose
// training count is below `threshold`, the percentage of its bags whose gold
// relation ranks within the top K of the non-NA scores; averaged over those
// relations. `train_counts` is indexed by fine relation id.
double HitsAtKMacro(const std::vector<PredictionRecord>& preds,
                    const std::vector<std::size_t>& train_counts, std::size_t threshold,
                    std::size_t k);

struct HistogramBin {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t count = 0;
  std::size_t correct = 0;
  double accuracy() const {
    return count == 0 ? 0.0 : 100.0 * static_cast<double>(correct) / static_cast<double>(count);
  }
};

struct LevelAttentionStats {
  std::size_t level = 0;
  std::vector<HistogramBin> bins;
  std::size_t sentences = 0;
  std::size_t correct = 0;
  double mean_max = 0.0;
  // Percentage of sentences whose argmax alpha is the sentence's label.
  double accuracy() const {
    return sentences == 0 ? 0.0
                          : 100.0 * static_cast<double>(correct) / static_cast<double>(sentences);
  }
};

// Distribution of max(alpha) per level and how often the argmax hits the
// label. Throws ConfigError when alphas were not retained.
std::vector<LevelAttentionStats> AttentionDiagnostics(const std::vector<PredictionRecord>& preds,
                                                      std::size_t bins = 10);

enum class AttentionScoring { kLevel0, kProduct };

// Rescores bags from the bag-averaged sent2rel attention: level0 uses
// alpha0 directly, product multiplies alpha_l[ancestor_l(r)] over levels.
std::vector<PredictionRecord> PredictFromAttention(const std::vector<PredictionRecord>& preds,
                                                   AttentionScoring mode,
                                                   const RelationHierarchy* hierarchy);

// bag_key <TAB> gold ids (comma separated) <TAB> id:score,id:score,...
// Reading skips '#' header lines.
void WritePredictions(std::ostream& out, const std::vector<PredictionRecord>& preds);
std::vector<PredictionRecord> ReadPredictions(std::istream& in);
// recall <TAB> precision
void WriteCurve(std::ostream& out, const PrCurve& curve);
// level <TAB> bin_lo <TAB> bin_hi <TAB> count <TAB> accuracy
void WriteHistogram(std::ostream& out, const std::vector<LevelAttentionStats>& stats);

}  // namespace cora

#endif  // CORA_METRICS_H_
