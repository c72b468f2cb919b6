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

#ifndef CORA_CORPUS_H_
#define CORA_CORPUS_H_

#include <cstddef>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "cora/embedding.h"
#include "cora/hierarchy.h"

namespace cora {

// One distantly labeled sentence. tokens[head_pos] is the underscore-joined
// head surface form, likewise for the tail.
struct SentenceRecord {
  std::string head_id;
  std::string tail_id;
  std::string head_surface;
  std::string tail_surface;
  std::string relation;
  std::vector<std::string> tokens;
  std::size_t head_pos = 0;
  std::size_t tail_pos = 0;

  bool operator==(const SentenceRecord&) const = default;
};

enum class CorpusFormat { kNytText, kJsonl };

CorpusFormat ParseCorpusFormat(const std::string& name);
// Picks the format from the file extension (.jsonl -> jsonl, else nyt-text).
CorpusFormat GuessCorpusFormat(const std::string& path);

// Joins multi-word surface forms into one token ("belle harbor" ->
// "belle_harbor").
std::string JoinSurface(const std::string& surface);

// Throws InputError naming the violated invariant.
void ValidateRecord(const SentenceRecord& record);

// Parses one nyt-text line:
//   head_id tail_id head_surface tail_surface relation token ... ###END###
// Entity positions are located in the token sequence; a multi-word entity
// spelled out in the sentence is merged into the joined token.
SentenceRecord ParseNytLine(const std::string& line);
std::string FormatNytLine(const SentenceRecord& record);

SentenceRecord ParseJsonLine(const std::string& line);
std::string FormatJsonLine(const SentenceRecord& record);

struct MalformedLine {
  std::size_t line_number = 0;
  std::string reason;
};

struct CorpusLoadOptions {
  // Fraction of malformed non-empty lines tolerated before loading fails.
  double max_malformed_fraction = 0.01;
};

struct CorpusLoadResult {
  std::vector<SentenceRecord> records;
  std::vector<MalformedLine> malformed;
  std::size_t lines = 0;
};

CorpusLoadResult ReadCorpus(std::istream& in, CorpusFormat format,
                            const CorpusLoadOptions& options = {});
CorpusLoadResult LoadCorpus(const std::string& path, CorpusFormat format,
                            const CorpusLoadOptions& options = {});
void WriteCorpus(std::ostream& out, const std::vector<SentenceRecord>& records,
                 CorpusFormat format);

enum class BagGrouping {
  kPair,          // evaluation: one bag per entity pair, relation set as gold
  kPairRelation,  // training: one bag per (pair, relation)
};

struct Bag {
  std::string key;
  std::string head_id;
  std::string tail_id;
  // Empty under pair grouping.
  std::string relation;
  // Indices into the record list, ascending.
  std::vector<std::size_t> record_indices;
  // Hierarchy labels r0..rM. Under pair grouping these belong to the
  // smallest gold id.
  std::vector<std::size_t> labels;
  // Distinct fine-grained gold ids, ascending. Under pair grouping NA is
  // dropped when the pair also has a real relation.
  std::vector<std::size_t> gold;
};

// Groups records into bags sorted by key; records keep their original order
// inside a bag.
std::vector<Bag> BuildBags(const std::vector<SentenceRecord>& records, BagGrouping grouping,
                           const RelationHierarchy& hierarchy);

std::vector<std::string> RelationInventory(const std::vector<SentenceRecord>& records);

// Vocabulary over every token of the records.
Vocab BuildVocab(const std::vector<SentenceRecord>& records);

SentenceInput ToSentenceInput(const SentenceRecord& record, const Vocab& vocab);

}  // namespace cora

#endif  // CORA_CORPUS_H_
