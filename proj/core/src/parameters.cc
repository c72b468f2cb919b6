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

#include "cora/parameters.h"

#include "cora/errors.h"

namespace cora {

Parameter::Parameter(std::string name, Array value)
    : name(std::move(name)), value(std::move(value)) {
  grad = Array::Zeros(this->value.shape());
}

ParameterStore::ParameterStore(const ParameterStore& other)
    : params_(other.params_) {}

ParameterStore& ParameterStore::operator=(const ParameterStore& other) {
  params_ = other.params_;
  return *this;
}

Parameter& ParameterStore::Add(const std::string& name, Array value) {
  if (params_.count(name) != 0) {
    throw ContractError("duplicate parameter '" + name + "'");
  }
  auto [it, inserted] = params_.emplace(name, Parameter(name, std::move(value)));
  return it->second;
}

bool ParameterStore::Contains(const std::string& name) const {
  return params_.count(name) != 0;
}

Parameter& ParameterStore::Get(const std::string& name) {
  auto it = params_.find(name);
  if (it == params_.end()) throw ContractError("no parameter '" + name + "'");
  return it->second;
}

const Parameter& ParameterStore::Get(const std::string& name) const {
  auto it = params_.find(name);
  if (it == params_.end()) throw ContractError("no parameter '" + name + "'");
  return it->second;
}

void ParameterStore::ZeroGrad() {
  for (auto& [name, p] : params_) p.grad.Fill(0.0);
}

std::size_t ParameterStore::ScalarCount() const {
  std::size_t n = 0;
  for (const auto& [name, p] : params_) n += p.value.size();
  return n;
}

std::vector<std::string> ParameterStore::Names() const {
  std::vector<std::string> names;
  names.reserve(params_.size());
  for (const auto& [name, p] : params_) names.push_back(name);
  return names;
}

double ParameterStore::SquaredNorm() const {
  double total = 0.0;
  for (const auto& [name, p] : params_) {
    for (double v : p.value.values()) total += v * v;
  }
  return total;
}

}  // namespace cora
