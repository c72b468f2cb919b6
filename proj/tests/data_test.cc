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
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "cora/corpus.h"
#include "cora/errors.h"
#include "cora/hierarchy.h"
#include "cora/synthetic.h"
#include "cora/training.h"
#include "test_util.h"

namespace cora {
namespace {

constexpr const char* kFixture =
    "m.01 m.02 barack_obama hawaii /people/person/place_of_birth "
    "barack obama was born in hawaii . ###END###\n"
    "m.03 m.04 belle_harbor queens /location/location/contains "
    "queens includes belle harbor , a quiet neighborhood ###END###\n"
    "m.05 m.06 apple steve_jobs /business/company/founders "
    "steve_jobs started apple in a garage ###END###\n";

SentenceRecord Record(const std::string& h, const std::string& t, const std::string& rel) {
  SentenceRecord r;
  r.head_id = h;
  r.tail_id = t;
  r.head_surface = "x_" + h;
  r.tail_surface = "y_" + t;
  r.relation = rel;
  r.tokens = {r.head_surface, "and", r.tail_surface};
  r.head_pos = 0;
  r.tail_pos = 2;
  return r;
}

TEST(HierarchyTest, DerivesPathPrefixes) {
  EXPECT_EQ(DeriveHierarchy("/business/company/founders", 2),
            (std::vector<std::string>{"/business/company/founders", "/business/company",
                                      "/business"}));
  EXPECT_EQ(DeriveHierarchy("NA", 2), (std::vector<std::string>{"NA", "NA", "NA"}));
  EXPECT_EQ(DeriveHierarchy("/a/b", 0), (std::vector<std::string>{"/a/b"}));
}

TEST(HierarchyTest, TooShortPathIsInputError) {
  try {
    DeriveHierarchy("/business", 2);
    FAIL() << "expected InputError";
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("/business"), std::string::npos);
  }
}

TEST(HierarchyTest, NytInventoryHasPublishedLevelSizes) {
  std::ifstream in(std::string(CORA_TEST_DATA_DIR) + "/nyt_relations.txt");
  ASSERT_TRUE(in.good());
  std::vector<std::string> relations;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) relations.push_back(line);
  }
  const RelationHierarchy h(relations, 2);
  EXPECT_EQ(h.level_sizes(), (std::vector<std::size_t>{53, 36, 9}));
}

TEST(HierarchyTest, NaIsSharedAndSelfAncestor) {
  const RelationHierarchy h({"/a/x/p", "/a/x/q", "/b/y/r"}, 2);
  EXPECT_EQ(h.level_sizes(), (std::vector<std::size_t>{4, 3, 3}));
  for (std::size_t l = 0; l < 3; ++l) {
    EXPECT_EQ(h.Name(l, 0), "NA");
    EXPECT_EQ(h.Ancestor(l, 0), 0u);
  }
  EXPECT_EQ(h.Labels("/a/x/q"), (std::vector<std::size_t>{2, 1, 1}));
  EXPECT_EQ(h.Ancestor(1, h.Id(0, "/b/y/r")), h.Id(1, "/b/y"));
  EXPECT_THROW(h.Labels("/c/z/w"), InputError);
}

TEST(CorpusTest, ParsesFixture) {
  std::istringstream in(kFixture);
  const auto result = ReadCorpus(in, CorpusFormat::kNytText);
  ASSERT_EQ(result.records.size(), 3u);
  EXPECT_TRUE(result.malformed.empty());
  const auto& r = result.records[1];
  EXPECT_EQ(r.tokens[r.head_pos], "belle_harbor");
  EXPECT_EQ(r.tokens[r.tail_pos], "queens");
  EXPECT_EQ(r.tokens.size(), 7u);
  EXPECT_EQ(result.records[0].relation, "/people/person/place_of_birth");
}

TEST(CorpusTest, RejectsMissingEntityWithReason) {
  try {
    ParseNytLine("m.1 m.2 alice bob /a/b/c alice met carol ###END###");
    FAIL() << "expected InputError";
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("bob"), std::string::npos);
  }
  EXPECT_THROW(ParseNytLine("m.1 m.2 alice bob /a/b/c alice met bob"), InputError);
}

TEST(CorpusTest, MalformedLinesAboveThresholdFail) {
  std::string text = kFixture;
  text += "not a record\n";
  std::istringstream strict(text);
  try {
    ReadCorpus(strict, CorpusFormat::kNytText);
    FAIL() << "expected InputError";
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find('4'), std::string::npos);
  }
  std::istringstream lenient(text);
  CorpusLoadOptions options;
  options.max_malformed_fraction = 0.5;
  const auto result = ReadCorpus(lenient, CorpusFormat::kNytText, options);
  EXPECT_EQ(result.records.size(), 3u);
  ASSERT_EQ(result.malformed.size(), 1u);
  EXPECT_EQ(result.malformed[0].line_number, 4u);
}

TEST(CorpusTest, RoundTripsThroughJsonl) {
  std::istringstream in(kFixture);
  const auto original = ReadCorpus(in, CorpusFormat::kNytText).records;
  std::ostringstream json;
  WriteCorpus(json, original, CorpusFormat::kJsonl);
  std::istringstream json_in(json.str());
  const auto via_json = ReadCorpus(json_in, CorpusFormat::kJsonl).records;
  EXPECT_EQ(via_json, original);
  std::ostringstream text;
  WriteCorpus(text, via_json, CorpusFormat::kNytText);
  std::istringstream text_in(text.str());
  EXPECT_EQ(ReadCorpus(text_in, CorpusFormat::kNytText).records, original);
}

TEST(CorpusTest, FormatSelection) {
  EXPECT_EQ(ParseCorpusFormat("jsonl"), CorpusFormat::kJsonl);
  EXPECT_EQ(ParseCorpusFormat("nyt-text"), CorpusFormat::kNytText);
  EXPECT_THROW(ParseCorpusFormat("csv"), ConfigError);
  EXPECT_EQ(GuessCorpusFormat("a/train.jsonl"), CorpusFormat::kJsonl);
  EXPECT_EQ(GuessCorpusFormat("a/train.txt"), CorpusFormat::kNytText);
  EXPECT_EQ(JoinSurface("belle harbor"), "belle_harbor");
}

TEST(BagTest, GroupingDefinitions) {
  const RelationHierarchy h({"/a/b/c", "/a/b/d"}, 2);
  const std::vector<SentenceRecord> records = {
      Record("h1", "t1", "/a/b/c"), Record("h1", "t1", "/a/b/c"), Record("h1", "t1", "/a/b/d"),
      Record("h2", "t2", "NA")};
  const auto train = BuildBags(records, BagGrouping::kPairRelation, h);
  ASSERT_EQ(train.size(), 3u);
  const auto eval = BuildBags(records, BagGrouping::kPair, h);
  ASSERT_EQ(eval.size(), 2u);
  const Bag& pair = eval[0].head_id == "h1" ? eval[0] : eval[1];
  EXPECT_EQ(pair.record_indices, (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_EQ(pair.gold, (std::vector<std::size_t>{1, 2}));
  for (const auto& b : train) {
    if (b.relation == "/a/b/c") {
      EXPECT_EQ(b.record_indices.size(), 2u);
      EXPECT_EQ(b.labels, h.Labels("/a/b/c"));
    }
  }
}

TEST(BagTest, NaDroppedWhenPairHasRealRelation) {
  const RelationHierarchy h({"/a/b/c"}, 2);
  const auto bags = BuildBags({Record("h", "t", "NA"), Record("h", "t", "/a/b/c")},
                              BagGrouping::kPair, h);
  ASSERT_EQ(bags.size(), 1u);
  EXPECT_EQ(bags[0].gold, (std::vector<std::size_t>{1}));
}

TEST(BagTest, RandomRecordsArePartitioned) {
  const std::vector<std::string> rels = {"NA", "/a/b/c", "/a/b/d", "/e/f/g"};
  const RelationHierarchy h(rels, 2);
  Rng rng(3);
  std::vector<SentenceRecord> records;
  for (int i = 0; i < 1000; ++i) {
    records.push_back(Record("h" + std::to_string(rng.Index(30)), "t" + std::to_string(rng.Index(5)),
                             rels[rng.Index(rels.size())]));
  }
  for (auto grouping : {BagGrouping::kPair, BagGrouping::kPairRelation}) {
    const auto bags = BuildBags(records, grouping, h);
    std::vector<int> seen(records.size(), 0);
    std::size_t total = 0;
    for (std::size_t b = 0; b < bags.size(); ++b) {
      EXPECT_FALSE(bags[b].record_indices.empty());
      if (b > 0) EXPECT_LT(bags[b - 1].key, bags[b].key);
      for (std::size_t idx : bags[b].record_indices) {
        ++seen[idx];
        EXPECT_EQ(records[idx].head_id, bags[b].head_id);
        EXPECT_EQ(records[idx].tail_id, bags[b].tail_id);
      }
      total += bags[b].record_indices.size();
    }
    EXPECT_EQ(total, records.size());
    for (int s : seen) EXPECT_EQ(s, 1);
  }
}

TEST(BagTest, ExamplesCarryBagLabels) {
  const RelationHierarchy h({"/a/b/c"}, 2);
  const std::vector<SentenceRecord> records = {Record("h", "t", "/a/b/c"),
                                               Record("h", "t", "/a/b/c")};
  const Vocab vocab = BuildVocab(records);
  const auto examples = MakeExamples(BuildBags(records, BagGrouping::kPairRelation, h), records,
                                     vocab);
  ASSERT_EQ(examples.size(), 1u);
  EXPECT_EQ(examples[0].sentences.size(), 2u);
  EXPECT_EQ(examples[0].labels, (std::vector<std::size_t>{1, 1, 1}));
  EXPECT_EQ(examples[0].sentences[0].token_ids[0], vocab.Lookup("x_h"));
}

SynthConfig SmallSynth() {
  SynthConfig c;
  c.train_bags = 300;
  c.test_bags = 100;
  return c;
}

double MislabeledFraction(const SynthCorpus& corpus) {
  std::size_t bad = 0;
  for (const auto& m : corpus.manifest) bad += m.mislabeled ? 1 : 0;
  return static_cast<double>(bad) / static_cast<double>(corpus.manifest.size());
}

TEST(SyntheticTest, NoNoiseMeansNoMislabels) {
  SynthConfig c = SmallSynth();
  c.noise_rate = 0.0;
  const auto corpus = GenerateSynthetic(c);
  EXPECT_EQ(MislabeledFraction(corpus), 0.0);
  EXPECT_EQ(corpus.manifest.size(), corpus.train.size() + corpus.test.size());
}

TEST(SyntheticTest, NoiseRateWithinBinomialBand) {
  SynthConfig c;
  c.noise_rate = 0.3;
  c.train_bags = 2500;
  c.test_bags = 2500;
  c.na_fraction = 0.0;
  const auto corpus = GenerateSynthetic(c);
  ASSERT_GE(corpus.manifest.size(), 10000u);
  EXPECT_NEAR(MislabeledFraction(corpus), 0.3, 0.02);
  for (const auto& m : corpus.manifest) EXPECT_EQ(m.mislabeled, m.bag_label != m.true_relation);
}

TEST(SyntheticTest, ZeroExponentIsUniform) {
  SynthConfig c;
  c.zipf_exponent = 0.0;
  c.na_fraction = 0.0;
  c.min_bag_size = c.max_bag_size = 1;
  c.train_bags = 8000;
  c.test_bags = 1;
  const auto corpus = GenerateSynthetic(c);
  const auto counts = RelationCounts(corpus.train);
  ASSERT_EQ(counts.size(), 8u);
  // Multinomial: 8000 draws over 8 cells, sd ~ 29.6 per cell.
  for (const auto& [rel, n] : counts) EXPECT_NEAR(static_cast<double>(n), 1000.0, 150.0) << rel;
}

TEST(SyntheticTest, LongTailFractionMonotoneInExponent) {
  double prev = -1.0;
  for (double s : {0.0, 1.2, 2.5}) {
    SynthConfig c;
    c.zipf_exponent = s;
    c.branching = {2, 4, 4};
    c.train_bags = 1500;
    c.test_bags = 1;
    const auto corpus = GenerateSynthetic(c);
    const double frac = LongTailFraction(RelationCounts(corpus.train), corpus.ranked_relations, 50);
    EXPECT_GE(frac, prev) << "exponent " << s;
    prev = frac;
  }
  EXPECT_GT(prev, 0.0);
}

TEST(SyntheticTest, ReproducibleFromSeed) {
  const auto a = GenerateSynthetic(SmallSynth());
  const auto b = GenerateSynthetic(SmallSynth());
  EXPECT_EQ(a.train, b.train);
  EXPECT_EQ(a.test, b.test);
  std::ostringstream ma, mb;
  WriteManifest(ma, a.manifest);
  WriteManifest(mb, b.manifest);
  EXPECT_EQ(ma.str(), mb.str());
  SynthConfig other = SmallSynth();
  other.seed = 2;
  EXPECT_NE(GenerateSynthetic(other).train, a.train);
}

TEST(SyntheticTest, RecordsAreValidAndHierarchyShaped) {
  const auto corpus = GenerateSynthetic(SmallSynth());
  const RelationHierarchy h(corpus.ranked_relations, 2);
  EXPECT_EQ(h.level_sizes(), (std::vector<std::size_t>{9, 5, 3}));
  for (const auto& r : corpus.train) {
    EXPECT_NO_THROW(ValidateRecord(r));
    EXPECT_NO_THROW(h.Labels(r.relation));
  }
  std::ostringstream out;
  WriteManifest(out, corpus.manifest);
  std::istringstream in(out.str());
  const auto back = ReadManifest(in);
  ASSERT_EQ(back.size(), corpus.manifest.size());
  EXPECT_EQ(back[5].true_relation, corpus.manifest[5].true_relation);
  EXPECT_EQ(back[5].mislabeled, corpus.manifest[5].mislabeled);
}

TEST(SyntheticTest, InvalidConfigIsConfigError) {
  SynthConfig c;
  c.noise_rate = 1.0;
  EXPECT_THROW(c.Validate(), ConfigError);
  c = SynthConfig{};
  c.zipf_exponent = -0.1;
  EXPECT_THROW(c.Validate(), ConfigError);
}

}  // namespace
}  // namespace cora
