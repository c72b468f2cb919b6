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

#ifndef CORA_GRAD_CHECK_H_
#define CORA_GRAD_CHECK_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "cora/graph.h"
#include "cora/parameters.h"

namespace cora {

struct GradCheckOptions {
  double tolerance = 1e-3;
  double step = 1e-4;
  // Entries probed per tensor; tensors at or below this size are probed
  // exhaustively.
  std::size_t samples_per_tensor = 24;
  // Denominator floor so that two near-zero gradients compare as equal.
  double denominator_floor = 1e-6;
  std::uint64_t seed = 7;
};

struct TensorGradReport {
  std::string name;
  std::size_t probed = 0;
  double max_relative_error = 0.0;
  // Entry reaching the maximum.
  std::size_t worst_index = 0;
  double analytic = 0.0;
  double numeric = 0.0;
  bool finite = true;
  bool passed = false;
};

struct GradCheckReport {
  std::vector<TensorGradReport> tensors;
  double tolerance = 0.0;
  bool passed = false;

  double max_relative_error() const;
  std::string ToString() const;
};

// Builds the scalar objective on a fresh graph from the current parameter
// values. Must be deterministic.
using ObjectiveFn = std::function<Var(Graph&)>;

// Compares analytic gradients from Graph::Backward with central differences
// for sampled entries of every tensor in `params`. Parameter values are
// restored afterwards; gradients are left holding the analytic result.
GradCheckReport CheckGradients(ParameterStore& params, const ObjectiveFn& objective,
                               const GradCheckOptions& options = {});

}  // namespace cora

#endif  // CORA_GRAD_CHECK_H_
