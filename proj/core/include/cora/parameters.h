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

#ifndef CORA_PARAMETERS_H_
#define CORA_PARAMETERS_H_

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "cora/array.h"

namespace cora {

// A learnable tensor and its gradient slot.
struct Parameter {
  std::string name;
  Array value;
  Array grad;
  // Columns of an embedding table that must stay zero (e.g. padding).
  std::vector<std::size_t> frozen_columns;

  Parameter() = default;
  Parameter(std::string name, Array value);
};

// Named collection of every learnable array of a model. Iteration order is
// lexicographic by name, which keeps serialization and update order stable.
class ParameterStore {
 public:
  ParameterStore() = default;
  // Parameters are referenced by address from graphs and optimizers.
  ParameterStore(const ParameterStore& other);
  ParameterStore& operator=(const ParameterStore& other);
  ParameterStore(ParameterStore&&) = default;
  ParameterStore& operator=(ParameterStore&&) = default;

  Parameter& Add(const std::string& name, Array value);
  bool Contains(const std::string& name) const;
  Parameter& Get(const std::string& name);
  const Parameter& Get(const std::string& name) const;

  void ZeroGrad();
  std::size_t size() const { return params_.size(); }
  std::size_t ScalarCount() const;
  std::vector<std::string> Names() const;

  // Sum of squared parameter values.
  double SquaredNorm() const;

  auto begin() { return params_.begin(); }
  auto end() { return params_.end(); }
  auto begin() const { return params_.begin(); }
  auto end() const { return params_.end(); }

 private:
  std::map<std::string, Parameter> params_;
};

}  // namespace cora

#endif  // CORA_PARAMETERS_H_
