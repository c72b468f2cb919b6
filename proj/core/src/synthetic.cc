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

#include "cora/synthetic.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "cora/errors.h"
#include "cora/rng.h"

namespace cora {
namespace {

struct RelationNode {
  std::string name;
  std::vector<std::size_t> path;  // child index at each depth, root first
};

std::string LevelWord(std::size_t depth_from_bottom) {
  switch (depth_from_bottom) {
    case 0: return "rel";
    case 1: return "group";
    case 2: return "topic";
    default: return "area" + std::to_string(depth_from_bottom);
  }
}

std::string IndexString(const std::vector<std::size_t>& path, std::size_t len) {
  std::string s;
  for (std::size_t i = 0; i < len; ++i) {
    if (i > 0) s += '.';
    s += std::to_string(path[i]);
  }
  return s;
}

// Enumerates fine relations of the tree with their path strings, e.g.
// "/topic0/group0.1/rel0.1.0".
std::vector<RelationNode> BuildTree(const std::vector<std::size_t>& branching) {
  std::vector<std::vector<std::size_t>> paths = {{}};
  for (std::size_t b : branching) {
    std::vector<std::vector<std::size_t>> next;
    for (const auto& p : paths) {
      for (std::size_t c = 0; c < b; ++c) {
        auto q = p;
        q.push_back(c);
        next.push_back(q);
      }
    }
    paths = std::move(next);
  }
  const std::size_t levels = branching.size();
  std::vector<RelationNode> nodes;
  for (const auto& p : paths) {
    RelationNode node;
    node.path = p;
    for (std::size_t d = 0; d < levels; ++d) {
      node.name += "/" + LevelWord(levels - 1 - d) + IndexString(p, d + 1);
    }
    nodes.push_back(std::move(node));
  }
  return nodes;
}

// Template of one relation: token slots where -1 is a random filler, -2 the
// head, -3 the tail and anything else a fixed trigger word id.
struct Template {
  std::vector<long> slots;
};

constexpr long kFiller = -1;
constexpr long kHead = -2;
constexpr long kTail = -3;

class Generator {
 public:
  explicit Generator(const SynthConfig& config)
      : config_(config), rng_(SubSeed(config.seed, "synthetic")) {
    nodes_ = BuildTree(config_.branching);
    const std::size_t levels = config_.branching.size();
    // Frequency ranks: order by the reversed child-index path so the first
    // children of every parent are the data-rich relations and their
    // siblings form the tail.
    std::vector<std::size_t> order(nodes_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      auto ra = nodes_[a].path, rb = nodes_[b].path;
      std::reverse(ra.begin(), ra.end());
      std::reverse(rb.begin(), rb.end());
      return ra < rb;
    });
    ranked_ = order;
    for (std::size_t rank = 0; rank < ranked_.size(); ++rank) {
      zipf_weights_.push_back(
          1.0 / std::pow(static_cast<double>(rank + 1), config_.zipf_exponent));
    }

    // Trigger vocabulary: one pool per node at every level.
    for (const auto& node : nodes_) {
      std::vector<std::vector<std::string>> per_level;
      for (std::size_t d = 0; d < levels; ++d) {
        const std::string prefix =
            "t" + LevelWord(levels - 1 - d) + IndexString(node.path, d + 1) + "_";
        std::vector<std::string> pool;
        for (std::size_t k = 0; k < config_.triggers_per_node; ++k) {
          pool.push_back(prefix + std::to_string(k));
        }
        per_level.push_back(std::move(pool));
      }
      trigger_pools_.push_back(std::move(per_level));
    }
    for (std::size_t i = 0; i < config_.vocab_size; ++i) {
      words_.push_back("w" + std::to_string(i));
    }
    for (std::size_t rel = 0; rel <= nodes_.size(); ++rel) {
      std::vector<Template> templates;
      for (std::size_t t = 0; t < config_.templates_per_relation; ++t) {
        templates.push_back(MakeTemplate(rel));
      }
      templates_.push_back(std::move(templates));
    }
  }

  SynthCorpus Run() {
    SynthCorpus corpus;
    for (std::size_t r : ranked_) corpus.ranked_relations.push_back(nodes_[r].name);
    std::set<std::pair<std::size_t, std::size_t>> used_pairs;
    Emit("train", config_.train_bags, used_pairs, corpus.train, corpus.manifest);
    Emit("test", config_.test_bags, used_pairs, corpus.test, corpus.manifest);
    return corpus;
  }

 private:
  // Relation index nodes_.size() stands for NA.
  std::size_t na() const { return nodes_.size(); }

  std::string RelationName(std::size_t rel) const {
    return rel == na() ? kNaRelation : nodes_[rel].name;
  }

  std::size_t Word(const std::string& w) {
    auto it = std::find(extra_words_.begin(), extra_words_.end(), w);
    if (it != extra_words_.end()) return static_cast<std::size_t>(it - extra_words_.begin());
    extra_words_.push_back(w);
    return extra_words_.size() - 1;
  }

  Template MakeTemplate(std::size_t rel) {
    const std::size_t length =
        config_.min_length + rng_.Index(config_.max_length - config_.min_length + 1);
    Template t;
    t.slots.assign(length, kFiller);
    std::vector<std::size_t> positions(length);
    for (std::size_t i = 0; i < length; ++i) positions[i] = i;
    rng_.Shuffle(positions);
    std::size_t next = 0;
    t.slots[positions[next++]] = kHead;
    t.slots[positions[next++]] = kTail;
    if (rel != na()) {
      for (const auto& pool : trigger_pools_[rel]) {
        if (next >= length) break;
        t.slots[positions[next++]] = static_cast<long>(Word(pool[rng_.Index(pool.size())]));
      }
    }
    return t;
  }

  std::vector<std::string> Render(std::size_t rel, const std::string& head,
                                  const std::string& tail, std::size_t* head_pos,
                                  std::size_t* tail_pos) {
    const auto& options = templates_[rel];
    const Template& t = options[rng_.Index(options.size())];
    std::vector<std::string> tokens;
    tokens.reserve(t.slots.size());
    for (std::size_t i = 0; i < t.slots.size(); ++i) {
      const long slot = t.slots[i];
      if (slot == kHead) {
        *head_pos = i;
        tokens.push_back(head);
      } else if (slot == kTail) {
        *tail_pos = i;
        tokens.push_back(tail);
      } else if (slot == kFiller) {
        tokens.push_back(words_[rng_.Index(words_.size())]);
      } else {
        tokens.push_back(extra_words_[static_cast<std::size_t>(slot)]);
      }
    }
    return tokens;
  }

  void Emit(const std::string& split, std::size_t bags,
            std::set<std::pair<std::size_t, std::size_t>>& used_pairs,
            std::vector<SentenceRecord>& out, std::vector<ManifestEntry>& manifest) {
    const std::size_t relations = nodes_.size() + 1;
    for (std::size_t b = 0; b < bags; ++b) {
      std::size_t head, tail;
      do {
        head = rng_.Index(config_.num_entities);
        tail = rng_.Index(config_.num_entities);
      } while (head == tail || used_pairs.count({head, tail}) != 0);
      used_pairs.insert({head, tail});

      const std::size_t label = rng_.Bernoulli(config_.na_fraction)
                                    ? na()
                                    : ranked_[rng_.Categorical(zipf_weights_)];
      const std::size_t size =
          config_.min_bag_size + rng_.Index(config_.max_bag_size - config_.min_bag_size + 1);
      for (std::size_t s = 0; s < size; ++s) {
        std::size_t truth = label;
        if (rng_.Bernoulli(config_.noise_rate)) {
          truth = rng_.Index(relations - 1);
          if (truth >= label) ++truth;
        }
        SentenceRecord r;
        r.head_id = "m." + std::to_string(head);
        r.tail_id = "m." + std::to_string(tail);
        r.head_surface = "ent" + std::to_string(head);
        r.tail_surface = "ent" + std::to_string(tail);
        r.relation = RelationName(label);
        r.tokens = Render(truth, r.head_surface, r.tail_surface, &r.head_pos, &r.tail_pos);
        ManifestEntry m;
        m.split = split;
        m.index = out.size();
        m.bag_label = r.relation;
        m.true_relation = RelationName(truth);
        m.mislabeled = truth != label;
        out.push_back(std::move(r));
        manifest.push_back(std::move(m));
      }
    }
  }

  const SynthConfig& config_;
  Rng rng_;
  std::vector<RelationNode> nodes_;
  std::vector<std::size_t> ranked_;
  std::vector<double> zipf_weights_;
  std::vector<std::vector<std::vector<std::string>>> trigger_pools_;
  std::vector<std::string> words_;
  std::vector<std::string> extra_words_;
  std::vector<std::vector<Template>> templates_;
};

}  // namespace

void SynthConfig::Validate() const {
  if (branching.empty()) throw ConfigError("synth: branching must name at least one level");
  for (std::size_t b : branching) {
    if (b == 0) throw ConfigError("synth: branching factors must be positive");
  }
  if (noise_rate < 0.0 || noise_rate >= 1.0) throw ConfigError("synth: noise_rate must lie in [0, 1)");
  if (zipf_exponent < 0.0) throw ConfigError("synth: zipf_exponent must be >= 0");
  if (na_fraction < 0.0 || na_fraction >= 1.0) throw ConfigError("synth: na_fraction must lie in [0, 1)");
  if (min_bag_size == 0 || max_bag_size < min_bag_size) throw ConfigError("synth: bad bag size range");
  if (min_length < branching.size() + 2 || max_length < min_length) {
    throw ConfigError("synth: sentence length must fit entities and triggers");
  }
  if (num_entities < 2) throw ConfigError("synth: need at least two entities");
  if (vocab_size == 0 || templates_per_relation == 0 || triggers_per_node == 0) {
    throw ConfigError("synth: vocab, template and trigger counts must be positive");
  }
  const double pairs = static_cast<double>(num_entities) * static_cast<double>(num_entities - 1);
  if (static_cast<double>(train_bags + test_bags) > 0.5 * pairs) {
    throw ConfigError("synth: too many bags for the entity pool");
  }
}

SynthCorpus GenerateSynthetic(const SynthConfig& config) {
  config.Validate();
  return Generator(config).Run();
}

void WriteManifest(std::ostream& out, const std::vector<ManifestEntry>& manifest) {
  out << "sentence_id\tbag_label\ttrue_relation\tmislabeled\n";
  for (const auto& m : manifest) {
    out << m.split << ':' << m.index << '\t' << m.bag_label << '\t' << m.true_relation
        << '\t' << (m.mislabeled ? 1 : 0) << '\n';
  }
}

std::vector<ManifestEntry> ReadManifest(std::istream& in) {
  std::vector<ManifestEntry> out;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line_number == 1 || line.empty()) continue;
    std::istringstream ls(line);
    std::string id, label, truth;
    int flag = 0;
    if (!(ls >> id >> label >> truth >> flag)) {
      throw InputError("manifest line " + std::to_string(line_number) + " is malformed");
    }
    const auto colon = id.find(':');
    if (colon == std::string::npos) {
      throw InputError("manifest line " + std::to_string(line_number) + ": bad sentence id");
    }
    ManifestEntry m;
    m.split = id.substr(0, colon);
    m.index = std::stoul(id.substr(colon + 1));
    m.bag_label = label;
    m.true_relation = truth;
    m.mislabeled = flag != 0;
    out.push_back(std::move(m));
  }
  return out;
}

std::map<std::string, std::size_t> RelationCounts(const std::vector<SentenceRecord>& records) {
  std::map<std::string, std::size_t> counts;
  for (const auto& r : records) ++counts[r.relation];
  return counts;
}

double LongTailFraction(const std::map<std::string, std::size_t>& counts,
                        const std::vector<std::string>& relations, std::size_t threshold) {
  std::size_t total = 0, tail = 0;
  for (const auto& rel : relations) {
    if (rel == kNaRelation) continue;
    ++total;
    auto it = counts.find(rel);
    const std::size_t n = it == counts.end() ? 0 : it->second;
    if (n < threshold) ++tail;
  }
  return total == 0 ? 0.0 : static_cast<double>(tail) / static_cast<double>(total);
}

}  // namespace cora
