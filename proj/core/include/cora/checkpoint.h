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

#ifndef CORA_CHECKPOINT_H_
#define CORA_CHECKPOINT_H_

#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "cora/config.h"
#include "cora/embedding.h"
#include "cora/hierarchy.h"
#include "cora/model.h"
#include "cora/parameters.h"
#include "cora/training.h"

namespace cora {

inline constexpr int kCheckpointVersion = 1;

// Everything needed to rebuild a model, plus optimizer state for resuming.
// Values are written as hex floats, so save/load is bit-exact.
struct Checkpoint {
  ExperimentConfig config;
  Vocab vocab;
  // Fine-grained relation strings in id order, NA first.
  std::vector<std::string> relations;
  ParameterStore params;
  std::optional<TrainProgress> progress;

  RelationHierarchy Hierarchy() const;
  CoraModel Model() const;
};

void WriteCheckpoint(std::ostream& out, const ExperimentConfig& config, const Vocab& vocab,
                     const RelationHierarchy& hierarchy, const ParameterStore& params,
                     const TrainProgress* progress);
// Throws InputError on a malformed or version-mismatched file.
Checkpoint ReadCheckpoint(std::istream& in);

void SaveCheckpoint(const std::string& path, const ExperimentConfig& config, const Vocab& vocab,
                    const RelationHierarchy& hierarchy, const ParameterStore& params,
                    const TrainProgress* progress);
Checkpoint LoadCheckpoint(const std::string& path);

}  // namespace cora

#endif  // CORA_CHECKPOINT_H_
