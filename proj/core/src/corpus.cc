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

#include "cora/corpus.h"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "cora/errors.h"
#include "json.hpp"

namespace cora {
namespace {

constexpr const char* kEndMarker = "###END###";

std::vector<std::string> SplitWhitespace(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

std::vector<std::string> SplitOn(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

// Finds the joined surface, merging a spelled-out multi-word form in place.
// Returns tokens.size() when absent.
std::size_t LocateEntity(std::vector<std::string>& tokens, const std::string& surface,
                         std::size_t skip) {
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i != skip && tokens[i] == surface) return i;
  }
  const auto words = SplitOn(surface, '_');
  if (words.size() < 2) return tokens.size();
  for (std::size_t i = 0; i + words.size() <= tokens.size(); ++i) {
    if (std::equal(words.begin(), words.end(), tokens.begin() + i)) {
      tokens.erase(tokens.begin() + i + 1, tokens.begin() + i + words.size());
      tokens[i] = surface;
      return i;
    }
  }
  return tokens.size();
}

}  // namespace

CorpusFormat ParseCorpusFormat(const std::string& name) {
  if (name == "nyt-text") return CorpusFormat::kNytText;
  if (name == "jsonl") return CorpusFormat::kJsonl;
  throw ConfigError("unknown corpus format '" + name + "' (nyt-text, jsonl)");
}

CorpusFormat GuessCorpusFormat(const std::string& path) {
  const std::string ext = ".jsonl";
  if (path.size() >= ext.size() &&
      path.compare(path.size() - ext.size(), ext.size(), ext) == 0) {
    return CorpusFormat::kJsonl;
  }
  return CorpusFormat::kNytText;
}

std::string JoinSurface(const std::string& surface) {
  std::string out;
  for (const auto& w : SplitWhitespace(surface)) {
    if (!out.empty()) out += '_';
    out += w;
  }
  return out;
}

void ValidateRecord(const SentenceRecord& r) {
  if (r.head_id.empty() || r.tail_id.empty()) throw InputError("missing entity id");
  if (r.relation.empty()) throw InputError("missing relation");
  if (r.tokens.empty()) throw InputError("empty sentence");
  if (r.head_pos >= r.tokens.size() || r.tail_pos >= r.tokens.size()) {
    throw InputError("entity position outside sentence of " +
                     std::to_string(r.tokens.size()) + " tokens");
  }
  if (r.head_pos == r.tail_pos) throw InputError("head and tail share a position");
  if (r.tokens[r.head_pos] != r.head_surface) {
    throw InputError("head surface '" + r.head_surface + "' absent at position " +
                     std::to_string(r.head_pos));
  }
  if (r.tokens[r.tail_pos] != r.tail_surface) {
    throw InputError("tail surface '" + r.tail_surface + "' absent at position " +
                     std::to_string(r.tail_pos));
  }
}

SentenceRecord ParseNytLine(const std::string& line) {
  auto fields = SplitWhitespace(line);
  if (fields.size() < 7) throw InputError("expected at least 7 fields");
  if (fields.back() != kEndMarker) throw InputError("missing ###END### marker");
  SentenceRecord r;
  r.head_id = fields[0];
  r.tail_id = fields[1];
  r.head_surface = JoinSurface(fields[2]);
  r.tail_surface = JoinSurface(fields[3]);
  r.relation = fields[4];
  r.tokens.assign(fields.begin() + 5, fields.end() - 1);
  r.head_pos = LocateEntity(r.tokens, r.head_surface, r.tokens.size());
  if (r.head_pos == r.tokens.size()) {
    throw InputError("head surface '" + r.head_surface + "' absent from tokens");
  }
  r.tail_pos = LocateEntity(r.tokens, r.tail_surface, r.head_pos);
  if (r.tail_pos == r.tokens.size()) {
    throw InputError("tail surface '" + r.tail_surface + "' absent from tokens");
  }
  // A merge for the tail may shift the head left of it.
  if (r.tokens[r.head_pos] != r.head_surface) {
    r.head_pos = LocateEntity(r.tokens, r.head_surface, r.tail_pos);
  }
  ValidateRecord(r);
  return r;
}

std::string FormatNytLine(const SentenceRecord& r) {
  std::string out = r.head_id + '\t' + r.tail_id + '\t' + r.head_surface + '\t' +
                    r.tail_surface + '\t' + r.relation + '\t';
  for (const auto& t : r.tokens) out += t + ' ';
  return out + kEndMarker;
}

SentenceRecord ParseJsonLine(const std::string& line) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("invalid json: ") + e.what());
  }
  SentenceRecord r;
  try {
    r.head_id = j.at("head_id").get<std::string>();
    r.tail_id = j.at("tail_id").get<std::string>();
    r.head_surface = j.at("head_surface").get<std::string>();
    r.tail_surface = j.at("tail_surface").get<std::string>();
    r.relation = j.at("relation").get<std::string>();
    r.tokens = j.at("tokens").get<std::vector<std::string>>();
    r.head_pos = j.at("head_pos").get<std::size_t>();
    r.tail_pos = j.at("tail_pos").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("bad record field: ") + e.what());
  }
  ValidateRecord(r);
  return r;
}

std::string FormatJsonLine(const SentenceRecord& r) {
  nlohmann::ordered_json j;
  j["head_id"] = r.head_id;
  j["tail_id"] = r.tail_id;
  j["head_surface"] = r.head_surface;
  j["tail_surface"] = r.tail_surface;
  j["relation"] = r.relation;
  j["tokens"] = r.tokens;
  j["head_pos"] = r.head_pos;
  j["tail_pos"] = r.tail_pos;
  return j.dump();
}

CorpusLoadResult ReadCorpus(std::istream& in, CorpusFormat format,
                            const CorpusLoadOptions& options) {
  CorpusLoadResult result;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    ++result.lines;
    try {
      result.records.push_back(format == CorpusFormat::kJsonl ? ParseJsonLine(line)
                                                              : ParseNytLine(line));
    } catch (const InputError& e) {
      result.malformed.push_back({line_number, e.what()});
    }
  }
  if (result.lines > 0 &&
      static_cast<double>(result.malformed.size()) >
          options.max_malformed_fraction * static_cast<double>(result.lines)) {
    std::string msg = std::to_string(result.malformed.size()) + " of " +
                      std::to_string(result.lines) + " lines malformed:";
    for (std::size_t i = 0; i < result.malformed.size() && i < 20; ++i) {
      msg += "\n  line " + std::to_string(result.malformed[i].line_number) + ": " +
             result.malformed[i].reason;
    }
    throw InputError(msg);
  }
  return result;
}

CorpusLoadResult LoadCorpus(const std::string& path, CorpusFormat format,
                            const CorpusLoadOptions& options) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open corpus '" + path + "'");
  return ReadCorpus(in, format, options);
}

void WriteCorpus(std::ostream& out, const std::vector<SentenceRecord>& records,
                 CorpusFormat format) {
  for (const auto& r : records) {
    out << (format == CorpusFormat::kJsonl ? FormatJsonLine(r) : FormatNytLine(r)) << '\n';
  }
}

std::vector<Bag> BuildBags(const std::vector<SentenceRecord>& records, BagGrouping grouping,
                           const RelationHierarchy& hierarchy) {
  std::map<std::string, Bag> by_key;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const SentenceRecord& r = records[i];
    std::string key = r.head_id + "|" + r.tail_id;
    if (grouping == BagGrouping::kPairRelation) key += "|" + r.relation;
    auto [it, inserted] = by_key.try_emplace(key);
    Bag& bag = it->second;
    if (inserted) {
      bag.key = key;
      bag.head_id = r.head_id;
      bag.tail_id = r.tail_id;
      if (grouping == BagGrouping::kPairRelation) bag.relation = r.relation;
    }
    bag.record_indices.push_back(i);
    const std::size_t fine = hierarchy.Id(0, r.relation);
    if (std::find(bag.gold.begin(), bag.gold.end(), fine) == bag.gold.end()) {
      bag.gold.push_back(fine);
    }
  }
  std::vector<Bag> bags;
  bags.reserve(by_key.size());
  for (auto& [key, bag] : by_key) {
    std::sort(bag.gold.begin(), bag.gold.end());
    if (bag.gold.size() > 1 && bag.gold.front() == 0) bag.gold.erase(bag.gold.begin());
    bag.labels = hierarchy.Labels(hierarchy.Name(0, bag.gold.front()));
    bags.push_back(std::move(bag));
  }
  return bags;
}

std::vector<std::string> RelationInventory(const std::vector<SentenceRecord>& records) {
  std::set<std::string> names;
  for (const auto& r : records) names.insert(r.relation);
  return {names.begin(), names.end()};
}

Vocab BuildVocab(const std::vector<SentenceRecord>& records) {
  std::set<std::string> tokens;
  for (const auto& r : records) tokens.insert(r.tokens.begin(), r.tokens.end());
  Vocab vocab;
  for (const auto& t : tokens) vocab.Add(t);
  return vocab;
}

SentenceInput ToSentenceInput(const SentenceRecord& record, const Vocab& vocab) {
  SentenceInput in;
  in.token_ids = vocab.Encode(record.tokens);
  in.head_pos = record.head_pos;
  in.tail_pos = record.tail_pos;
  return in;
}

}  // namespace cora
