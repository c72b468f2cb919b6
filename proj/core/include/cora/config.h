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

#ifndef CORA_CONFIG_H_
#define CORA_CONFIG_H_

#include <cstddef>
#include <string>
#include <vector>

#include "cora/model.h"
#include "cora/synthetic.h"
#include "cora/training.h"

namespace cora {

// Everything one experiment needs: model widths, training, and the
// synthetic corpus recipe. Serialized as flat `key=value` lines.
struct ExperimentConfig {
  TrainConfig train;
  std::size_t d_w = 50;
  std::size_t d_p = 5;
  std::size_t d_c = 230;
  std::size_t window = 3;
  std::size_t max_dist = 30;
  SynthConfig synth;
  std::string word_vectors;          // optional pre-trained vectors
  std::size_t checkpoint_every = 0;  // epochs; 0 writes only the final one

  void Validate() const;
};

// Sets one key. Throws ConfigError for unknown keys or unparsable values.
void SetConfigValue(ExperimentConfig& config, const std::string& key, const std::string& value);
// Applies a `key=value` override.
void ApplyOverride(ExperimentConfig& config, const std::string& assignment);

// Parses config text on top of `base`. Blank lines and '#' comments are
// skipped.
ExperimentConfig ParseConfig(const std::string& text, ExperimentConfig base = {});
// Every key, one per line, in a fixed order; ParseConfig round-trips it.
std::string FormatConfig(const ExperimentConfig& config);

// Built-in presets: "tiny", "synthetic", "nyt".
bool IsPreset(const std::string& name);
ExperimentConfig Preset(const std::string& name);
// A preset name or a config file path.
ExperimentConfig LoadConfig(const std::string& name_or_path);

std::vector<std::string> ConfigKeys();

ModelConfig MakeModelConfig(const ExperimentConfig& config,
                            std::vector<std::size_t> level_sizes);

}  // namespace cora

#endif  // CORA_CONFIG_H_
