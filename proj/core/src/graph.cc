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

#include "cora/graph.h"

#include "cora/errors.h"

namespace cora {

const Array& BackwardContext::value() const {
  return graph_->nodes_[node_].value;
}

const Array& BackwardContext::grad() const {
  return graph_->nodes_[node_].grad;
}

const Array& BackwardContext::parent_value(std::size_t i) const {
  return graph_->nodes_[graph_->nodes_[node_].parents.at(i)].value;
}

Array* BackwardContext::parent_grad(std::size_t i) {
  auto& parent = graph_->nodes_[graph_->nodes_[node_].parents.at(i)];
  return parent.requires_grad ? &parent.grad : nullptr;
}

Var Graph::Constant(Array value) {
  Node node;
  node.value = std::move(value);
  nodes_.push_back(std::move(node));
  return Var{static_cast<int>(nodes_.size()) - 1};
}

Var Graph::Leaf(Array value) {
  Var v = Constant(std::move(value));
  nodes_[v.id].requires_grad = true;
  return v;
}

Var Graph::Param(Parameter& param) {
  auto it = param_nodes_.find(&param);
  if (it != param_nodes_.end()) return Var{it->second};
  Var v = Leaf(param.value);
  nodes_[v.id].param = &param;
  param_nodes_.emplace(&param, v.id);
  return v;
}

Var Graph::Record(Array value, std::vector<Var> parents, BackwardFn backward) {
  Node node;
  node.value = std::move(value);
  node.parents.reserve(parents.size());
  for (Var p : parents) {
    if (!p.valid() || p.id >= static_cast<int>(nodes_.size())) {
      throw ContractError("op parent is not on this graph");
    }
    node.parents.push_back(p.id);
    node.requires_grad = node.requires_grad || nodes_[p.id].requires_grad;
  }
  if (node.requires_grad) node.backward = std::move(backward);
  nodes_.push_back(std::move(node));
  return Var{static_cast<int>(nodes_.size()) - 1};
}

const Array& Graph::grad(Var v) const {
  const Node& node = nodes_.at(v.id);
  if (node.grad.size() == 0) {
    throw ContractError("gradient requested for a node without one");
  }
  return node.grad;
}

void Graph::Backward(Var loss) {
  Node& root = nodes_.at(loss.id);
  if (root.value.size() != 1) {
    throw ContractError("backward needs a scalar loss, got shape " +
                        ShapeString(root.value.shape()));
  }
  for (Node& node : nodes_) {
    if (node.requires_grad) {
      node.grad = Array::Zeros(node.value.shape());
    }
  }
  visit_counts_.assign(nodes_.size(), 0);
  if (!root.requires_grad) return;
  root.grad[0] = 1.0;

  for (int id = loss.id; id >= 0; --id) {
    Node& node = nodes_[id];
    if (!node.requires_grad || !node.backward) continue;
    BackwardContext ctx(this, id);
    node.backward(ctx);
    ++visit_counts_[id];
  }
  for (Node& node : nodes_) {
    if (node.param == nullptr) continue;
    auto& dst = node.param->grad.data();
    auto& src = node.grad.data();
    const std::size_t cols = node.param->value.cols();
    for (std::size_t c : node.param->frozen_columns) {
      for (std::size_t r = 0; r < node.param->value.rows(); ++r) {
        src[r * cols + c] = 0.0;
      }
    }
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
  }
}

}  // namespace cora
