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

#include "cora/hierarchy.h"

#include <algorithm>
#include <set>

#include "cora/errors.h"

namespace cora {
namespace {

std::vector<std::string> SplitPath(const std::string& relation) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (start <= relation.size()) {
    std::size_t slash = relation.find('/', start);
    if (slash == std::string::npos) slash = relation.size();
    if (slash > start) parts.push_back(relation.substr(start, slash - start));
    start = slash + 1;
  }
  return parts;
}

}  // namespace

std::vector<std::string> DeriveHierarchy(const std::string& relation, std::size_t depth) {
  if (relation == kNaRelation) return std::vector<std::string>(depth + 1, kNaRelation);
  if (relation.empty() || relation[0] != '/') {
    throw InputError("relation '" + relation + "' is neither NA nor a /-path");
  }
  const auto parts = SplitPath(relation);
  if (parts.size() < depth + 1) {
    throw InputError("relation '" + relation + "' has " + std::to_string(parts.size()) +
                     " path components, depth " + std::to_string(depth) + " needs " +
                     std::to_string(depth + 1));
  }
  std::vector<std::string> out;
  for (std::size_t level = 0; level <= depth; ++level) {
    std::string path;
    for (std::size_t i = 0; i + level < parts.size(); ++i) path += "/" + parts[i];
    out.push_back(path);
  }
  return out;
}

RelationHierarchy::RelationHierarchy(const std::vector<std::string>& relations,
                                     std::size_t depth) {
  std::vector<std::set<std::string>> names(depth + 1);
  std::set<std::string> fine(relations.begin(), relations.end());
  fine.erase(kNaRelation);
  for (const auto& rel : fine) {
    const auto path = DeriveHierarchy(rel, depth);
    for (std::size_t level = 0; level <= depth; ++level) names[level].insert(path[level]);
  }
  levels_.resize(depth + 1);
  index_.resize(depth + 1);
  for (std::size_t level = 0; level <= depth; ++level) {
    levels_[level].push_back(kNaRelation);
    levels_[level].insert(levels_[level].end(), names[level].begin(), names[level].end());
    for (std::size_t id = 0; id < levels_[level].size(); ++id) {
      index_[level].emplace(levels_[level][id], id);
    }
  }
  ancestors_.assign(depth + 1, std::vector<std::size_t>(levels_[0].size(), 0));
  for (std::size_t id = 0; id < levels_[0].size(); ++id) {
    const auto path = DeriveHierarchy(levels_[0][id], depth);
    for (std::size_t level = 0; level <= depth; ++level) {
      ancestors_[level][id] = index_[level].at(path[level]);
    }
  }
}

std::vector<std::size_t> RelationHierarchy::level_sizes() const {
  std::vector<std::size_t> sizes;
  for (const auto& level : levels_) sizes.push_back(level.size());
  return sizes;
}

bool RelationHierarchy::Contains(std::size_t level, const std::string& name) const {
  return index_.at(level).count(name) != 0;
}

std::size_t RelationHierarchy::Id(std::size_t level, const std::string& name) const {
  auto it = index_.at(level).find(name);
  if (it == index_.at(level).end()) {
    throw InputError("unknown relation '" + name + "' at level " + std::to_string(level));
  }
  return it->second;
}

std::vector<std::size_t> RelationHierarchy::Labels(const std::string& relation) const {
  const std::size_t fine = Id(0, relation);
  std::vector<std::size_t> out(levels_.size());
  for (std::size_t level = 0; level < levels_.size(); ++level) {
    out[level] = ancestors_[level][fine];
  }
  return out;
}

std::size_t RelationHierarchy::Ancestor(std::size_t level, std::size_t fine_id) const {
  return ancestors_.at(level).at(fine_id);
}

}  // namespace cora
