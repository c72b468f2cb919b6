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

#include "cora/config.h"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "cora/errors.h"

namespace cora {
namespace {

std::string Trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::size_t ParseSize(const std::string& key, const std::string& v) {
  std::size_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ConfigError("config key '" + key + "': expected a non-negative integer, got '" + v + "'");
  }
  return out;
}

std::uint64_t ParseU64(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ConfigError("config key '" + key + "': expected an unsigned integer, got '" + v + "'");
  }
  return out;
}

double ParseReal(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double out = std::stod(v, &used);
    if (used == v.size()) return out;
  } catch (const std::exception&) {
  }
  throw ConfigError("config key '" + key + "': expected a number, got '" + v + "'");
}

bool ParseBool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError("config key '" + key + "': expected true or false, got '" + v + "'");
}

std::vector<std::size_t> ParseSizeList(const std::string& key, const std::string& v) {
  std::vector<std::size_t> out;
  std::stringstream in(v);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(ParseSize(key, Trim(item)));
  if (out.empty()) throw ConfigError("config key '" + key + "': empty list");
  return out;
}

std::string FormatReal(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

std::string FormatBool(bool v) { return v ? "true" : "false"; }

std::string FormatSizeList(const std::vector<std::size_t>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
  return out;
}

struct Field {
  std::function<void(ExperimentConfig&, const std::string&, const std::string&)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

#define CORA_SIZE(expr)                                                                  \
  Field{[](ExperimentConfig& c, const std::string& k, const std::string& v) {           \
          c.expr = ParseSize(k, v);                                                      \
        },                                                                               \
        [](const ExperimentConfig& c) { return std::to_string(c.expr); }}
#define CORA_REAL(expr)                                                                  \
  Field{[](ExperimentConfig& c, const std::string& k, const std::string& v) {           \
          c.expr = ParseReal(k, v);                                                      \
        },                                                                               \
        [](const ExperimentConfig& c) { return FormatReal(c.expr); }}
#define CORA_BOOL(expr)                                                                  \
  Field{[](ExperimentConfig& c, const std::string& k, const std::string& v) {           \
          c.expr = ParseBool(k, v);                                                      \
        },                                                                               \
        [](const ExperimentConfig& c) { return FormatBool(c.expr); }}
#define CORA_U64(expr)                                                                   \
  Field{[](ExperimentConfig& c, const std::string& k, const std::string& v) {           \
          c.expr = ParseU64(k, v);                                                       \
        },                                                                               \
        [](const ExperimentConfig& c) { return std::to_string(c.expr); }}

const std::vector<std::pair<std::string, Field>>& Fields() {
  static const std::vector<std::pair<std::string, Field>> fields = {
      {"learning_rate", CORA_REAL(train.learning_rate)},
      {"batch_size", CORA_SIZE(train.batch_size)},
      {"dropout_p", CORA_REAL(train.dropout_p)},
      {"weight_decay", CORA_REAL(train.weight_decay)},
      {"lambda", CORA_REAL(train.lambda)},
      {"epochs", CORA_SIZE(train.epochs)},
      {"seed", CORA_U64(train.seed)},
      {"m_levels", CORA_SIZE(train.m_levels)},
      {"no_sent2rel", CORA_BOOL(train.ablations.no_sent2rel)},
      {"no_attention_pool", CORA_BOOL(train.ablations.no_attention_pool)},
      {"no_aux_obj", CORA_BOOL(train.ablations.no_aux_obj)},
      {"no_entity_emb", CORA_BOOL(train.ablations.no_entity_emb)},
      {"d_w", CORA_SIZE(d_w)},
      {"d_p", CORA_SIZE(d_p)},
      {"d_c", CORA_SIZE(d_c)},
      {"window", CORA_SIZE(window)},
      {"max_dist", CORA_SIZE(max_dist)},
      {"checkpoint_every", CORA_SIZE(checkpoint_every)},
      {"word_vectors",
       Field{[](ExperimentConfig& c, const std::string&, const std::string& v) {
               c.word_vectors = v;
             },
             [](const ExperimentConfig& c) { return c.word_vectors; }}},
      {"branching",
       Field{[](ExperimentConfig& c, const std::string& k, const std::string& v) {
               c.synth.branching = ParseSizeList(k, v);
             },
             [](const ExperimentConfig& c) { return FormatSizeList(c.synth.branching); }}},
      {"vocab_size", CORA_SIZE(synth.vocab_size)},
      {"min_bag_size", CORA_SIZE(synth.min_bag_size)},
      {"max_bag_size", CORA_SIZE(synth.max_bag_size)},
      {"zipf_exponent", CORA_REAL(synth.zipf_exponent)},
      {"noise_rate", CORA_REAL(synth.noise_rate)},
      {"templates_per_relation", CORA_SIZE(synth.templates_per_relation)},
      {"triggers_per_node", CORA_SIZE(synth.triggers_per_node)},
      {"train_bags", CORA_SIZE(synth.train_bags)},
      {"test_bags", CORA_SIZE(synth.test_bags)},
      {"na_fraction", CORA_REAL(synth.na_fraction)},
      {"num_entities", CORA_SIZE(synth.num_entities)},
      {"min_length", CORA_SIZE(synth.min_length)},
      {"max_length", CORA_SIZE(synth.max_length)},
  };
  return fields;
}

#undef CORA_SIZE
#undef CORA_REAL
#undef CORA_BOOL
#undef CORA_U64

}  // namespace

void ExperimentConfig::Validate() const {
  train.Validate();
  if (d_w == 0 || d_p == 0 || d_c == 0) throw ConfigError("d_w, d_p and d_c must be positive");
  if (window % 2 == 0) {
    throw ConfigError("window " + std::to_string(window) + " must be odd");
  }
  if (max_dist == 0) throw ConfigError("max_dist must be positive");
  synth.Validate();
}

void SetConfigValue(ExperimentConfig& config, const std::string& key, const std::string& value) {
  for (const auto& [name, field] : Fields()) {
    if (name == key) {
      field.set(config, key, value);
      return;
    }
  }
  throw ConfigError("unknown config key '" + key + "'");
}

void ApplyOverride(ExperimentConfig& config, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) {
    throw ConfigError("override '" + assignment + "' is not key=value");
  }
  SetConfigValue(config, Trim(assignment.substr(0, eq)), Trim(assignment.substr(eq + 1)));
}

ExperimentConfig ParseConfig(const std::string& text, ExperimentConfig base) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = Trim(line);
    if (line.empty()) continue;
    try {
      ApplyOverride(base, line);
    } catch (const ConfigError& e) {
      throw ConfigError("config line " + std::to_string(line_number) + ": " + e.what());
    }
  }
  return base;
}

std::string FormatConfig(const ExperimentConfig& config) {
  std::string out;
  for (const auto& [name, field] : Fields()) out += name + "=" + field.get(config) + "\n";
  return out;
}

std::vector<std::string> ConfigKeys() {
  std::vector<std::string> keys;
  for (const auto& [name, field] : Fields()) keys.push_back(name);
  return keys;
}

bool IsPreset(const std::string& name) {
  return name == "tiny" || name == "synthetic" || name == "nyt";
}

ExperimentConfig Preset(const std::string& name) {
  ExperimentConfig c;
  if (name == "nyt") return c;
  if (name == "tiny") {
    c.d_w = 4;
    c.d_p = 2;
    c.d_c = 4;
    c.max_dist = 5;
    c.train.learning_rate = 0.01;
    c.train.batch_size = 2;
    c.train.dropout_p = 0.0;
    c.train.epochs = 2;
    c.synth.branching = {1, 2, 2};
    c.synth.vocab_size = 30;
    c.synth.train_bags = 20;
    c.synth.test_bags = 20;
    c.synth.num_entities = 40;
    c.synth.min_length = 6;
    c.synth.max_length = 9;
    return c;
  }
  if (name == "synthetic") {
    c.d_w = 16;
    c.d_p = 4;
    c.d_c = 32;
    c.max_dist = 20;
    c.train.learning_rate = 0.003;
    c.train.batch_size = 32;
    c.train.epochs = 8;
    return c;
  }
  throw ConfigError("unknown preset '" + name + "' (tiny, synthetic, nyt)");
}

ExperimentConfig LoadConfig(const std::string& name_or_path) {
  if (IsPreset(name_or_path)) return Preset(name_or_path);
  std::ifstream in(name_or_path);
  if (!in) throw ConfigError("cannot open config '" + name_or_path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return ParseConfig(buf.str());
}

ModelConfig MakeModelConfig(const ExperimentConfig& config,
                            std::vector<std::size_t> level_sizes) {
  if (level_sizes.size() != config.train.m_levels + 1) {
    throw ConfigError("hierarchy has " + std::to_string(level_sizes.size()) +
                      " levels but m_levels=" + std::to_string(config.train.m_levels));
  }
  ModelConfig m;
  m.embedding.word_dim = config.d_w;
  m.embedding.position_dim = config.d_p;
  m.embedding.max_distance = config.max_dist;
  m.encoder.channels = config.d_c;
  m.encoder.window = config.window;
  m.lambda = config.train.lambda;
  m.dropout_p = config.train.dropout_p;
  m.ablations = config.train.ablations;
  m.level_sizes = std::move(level_sizes);
  return m;
}

}  // namespace cora
