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

#ifndef CORA_GRAPH_H_
#define CORA_GRAPH_H_

#include <cstddef>
#include <functional>
#include <unordered_map>
#include <vector>

#include "cora/array.h"
#include "cora/parameters.h"

namespace cora {

// Handle to a node recorded on a Graph.
struct Var {
  int id = -1;
  bool valid() const { return id >= 0; }
};

class Graph;

// View handed to a node's gradient rule during the reverse sweep.
class BackwardContext {
 public:
  const Array& value() const;
  const Array& grad() const;
  const Array& parent_value(std::size_t i) const;
  // Null when parent i does not require a gradient.
  Array* parent_grad(std::size_t i);

 private:
  friend class Graph;
  BackwardContext(Graph* graph, int node) : graph_(graph), node_(node) {}
  Graph* graph_;
  int node_;
};

// Reverse-mode tape. Nodes are appended in evaluation order, so the tape is
// already topologically sorted and the reverse sweep walks it backwards,
// visiting each node once.
class Graph {
 public:
  using BackwardFn = std::function<void(BackwardContext&)>;

  Graph() = default;
  Graph(const Graph&) = delete;
  Graph& operator=(const Graph&) = delete;

  // Value without gradient.
  Var Constant(Array value);
  // Free input whose gradient is readable after Backward.
  Var Leaf(Array value);
  // Parameter leaf, one node per parameter per graph. Backward adds the
  // node gradient into `param.grad`.
  Var Param(Parameter& param);
  // Generic op. `backward` runs only if some parent requires a gradient.
  Var Record(Array value, std::vector<Var> parents, BackwardFn backward);

  const Array& value(Var v) const { return nodes_.at(v.id).value; }
  const Array& grad(Var v) const;
  bool requires_grad(Var v) const { return nodes_.at(v.id).requires_grad; }
  std::size_t size() const { return nodes_.size(); }

  // Populates gradients of every node reachable from `loss`. The loss must
  // hold exactly one value. Parameter gradients accumulate across calls.
  void Backward(Var loss);

  // Number of times each node's rule ran in the last Backward.
  const std::vector<int>& visit_counts() const { return visit_counts_; }

 private:
  friend class BackwardContext;

  struct Node {
    Array value;
    Array grad;
    std::vector<int> parents;
    BackwardFn backward;
    Parameter* param = nullptr;
    bool requires_grad = false;
  };

  std::vector<Node> nodes_;
  std::unordered_map<const Parameter*, int> param_nodes_;
  std::vector<int> visit_counts_;
};

}  // namespace cora

#endif  // CORA_GRAPH_H_
