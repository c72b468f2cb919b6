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

#include "cora/checkpoint.h"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "cora/errors.h"
#include "cora/file_util.h"

namespace cora {
namespace {

constexpr const char* kMagic = "cora-checkpoint";

void WriteArray(std::ostream& out, const Array& a) {
  char buf[48];
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%a", a[i]);
    out << (i ? " " : "") << buf;
  }
  out << '\n';
}

void WriteShape(std::ostream& out, const Array& a) {
  out << a.rank();
  for (std::size_t d : a.shape()) out << ' ' << d;
}

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  std::string Line() {
    std::string line;
    if (!std::getline(in_, line)) Fail("unexpected end of file");
    ++line_number_;
    return line;
  }

  // Reads "<tag> <count>" and returns count.
  std::size_t Section(const std::string& tag) {
    std::istringstream in(Line());
    std::string got;
    std::size_t count = 0;
    if (!(in >> got >> count) || got != tag) Fail("expected section '" + tag + "'");
    return count;
  }

  std::vector<std::size_t> Shape(std::istringstream& in) {
    std::size_t rank = 0;
    if (!(in >> rank) || rank < 1 || rank > 2) Fail("bad tensor rank");
    std::vector<std::size_t> shape(rank);
    for (auto& d : shape) {
      if (!(in >> d) || d == 0) Fail("bad tensor extent");
    }
    return shape;
  }

  Array Values(std::vector<std::size_t> shape) {
    Array a(std::move(shape));
    const std::string line = Line();
    const char* p = line.c_str();
    for (std::size_t i = 0; i < a.size(); ++i) {
      char* end = nullptr;
      a[i] = std::strtod(p, &end);
      if (end == p) Fail("expected " + std::to_string(a.size()) + " values");
      p = end;
    }
    while (*p == ' ') ++p;
    if (*p != '\0') Fail("trailing values");
    return a;
  }

  [[noreturn]] void Fail(const std::string& why) const {
    throw InputError("checkpoint line " + std::to_string(line_number_) + ": " + why);
  }

 private:
  std::istream& in_;
  std::size_t line_number_ = 0;
};

}  // namespace

RelationHierarchy Checkpoint::Hierarchy() const {
  return RelationHierarchy(relations, config.train.m_levels);
}

CoraModel Checkpoint::Model() const {
  return CoraModel(MakeModelConfig(config, Hierarchy().level_sizes()), params);
}

void WriteCheckpoint(std::ostream& out, const ExperimentConfig& config, const Vocab& vocab,
                     const RelationHierarchy& hierarchy, const ParameterStore& params,
                     const TrainProgress* progress) {
  out << kMagic << ' ' << kCheckpointVersion << '\n';
  const std::string cfg = FormatConfig(config);
  out << "config " << std::count(cfg.begin(), cfg.end(), '\n') << '\n' << cfg;
  out << "vocab " << vocab.size() << '\n';
  for (const auto& t : vocab.tokens()) out << t << '\n';
  const auto& fine = hierarchy.levels().at(0);
  out << "relations " << fine.size() << '\n';
  for (const auto& r : fine) out << r << '\n';
  out << "params " << params.size() << '\n';
  for (const auto& [name, p] : params) {
    out << name << ' ';
    WriteShape(out, p.value);
    out << ' ' << p.frozen_columns.size();
    for (std::size_t c : p.frozen_columns) out << ' ' << c;
    out << '\n';
    WriteArray(out, p.value);
  }
  if (progress != nullptr) {
    const auto& moments = progress->adam.moments();
    out << "progress 1\n" << progress->adam.step() << ' ' << progress->epoch << '\n';
    out << "moments " << moments.size() << '\n';
    for (const auto& [name, mv] : moments) {
      out << name << ' ';
      WriteShape(out, mv.first);
      out << '\n';
      WriteArray(out, mv.first);
      WriteArray(out, mv.second);
    }
  } else {
    out << "progress 0\n";
  }
  out << "end\n";
}

Checkpoint ReadCheckpoint(std::istream& in) {
  Reader r(in);
  Checkpoint ck;
  {
    std::istringstream head(r.Line());
    std::string magic;
    int version = 0;
    if (!(head >> magic >> version) || magic != kMagic) r.Fail("not a checkpoint file");
    if (version != kCheckpointVersion) {
      r.Fail("unsupported checkpoint version " + std::to_string(version));
    }
  }
  std::string cfg;
  for (std::size_t n = r.Section("config"), i = 0; i < n; ++i) cfg += r.Line() + '\n';
  try {
    ck.config = ParseConfig(cfg);
  } catch (const ConfigError& e) {
    r.Fail(e.what());
  }
  const std::size_t vocab_size = r.Section("vocab");
  for (std::size_t i = 0; i < vocab_size; ++i) {
    const std::string token = r.Line();
    if (i >= 2) ck.vocab.Add(token);
  }
  if (ck.vocab.size() != vocab_size) r.Fail("duplicate vocabulary tokens");
  for (std::size_t n = r.Section("relations"), i = 0; i < n; ++i) {
    ck.relations.push_back(r.Line());
  }
  for (std::size_t n = r.Section("params"), i = 0; i < n; ++i) {
    std::istringstream header(r.Line());
    std::string name;
    if (!(header >> name)) r.Fail("missing parameter name");
    auto shape = r.Shape(header);
    std::size_t frozen_count = 0;
    if (!(header >> frozen_count)) r.Fail("missing frozen column count");
    std::vector<std::size_t> frozen(frozen_count);
    for (auto& c : frozen) {
      if (!(header >> c)) r.Fail("bad frozen column");
    }
    Parameter& p = ck.params.Add(name, r.Values(std::move(shape)));
    p.frozen_columns = std::move(frozen);
  }
  if (r.Section("progress") > 0) {
    std::istringstream counters(r.Line());
    std::uint64_t step = 0;
    std::size_t epoch = 0;
    if (!(counters >> step >> epoch)) r.Fail("bad optimizer counters");
    const std::size_t moment_count = r.Section("moments");
    std::map<std::string, std::pair<Array, Array>> moments;
    for (std::size_t i = 0; i < moment_count; ++i) {
      std::istringstream header(r.Line());
      std::string name;
      if (!(header >> name)) r.Fail("missing moment name");
      auto shape = r.Shape(header);
      Array m = r.Values(shape);
      Array v = r.Values(shape);
      moments.emplace(name, std::make_pair(std::move(m), std::move(v)));
    }
    TrainProgress progress;
    progress.epoch = epoch;
    progress.adam.Restore(step, std::move(moments));
    ck.progress = std::move(progress);
  }
  if (r.Line() != "end") r.Fail("missing end marker");
  return ck;
}

void SaveCheckpoint(const std::string& path, const ExperimentConfig& config, const Vocab& vocab,
                    const RelationHierarchy& hierarchy, const ParameterStore& params,
                    const TrainProgress* progress) {
  std::ostringstream out;
  WriteCheckpoint(out, config, vocab, hierarchy, params, progress);
  WriteFileAtomic(path, out.str());
}

Checkpoint LoadCheckpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open checkpoint '" + path + "'");
  return ReadCheckpoint(in);
}

}  // namespace cora
