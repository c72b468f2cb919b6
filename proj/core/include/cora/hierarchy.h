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

#ifndef CORA_HIERARCHY_H_
#define CORA_HIERARCHY_H_

#include <cstddef>
#include <string>
#include <unordered_map>
#include <vector>

namespace cora {

inline constexpr const char* kNaRelation = "NA";

// Coarse-to-fine path strings for one relation: element l is the relation
// with its last l path components removed. "NA" maps to NA at every level.
//   "/business/company/founders", 2 ->
//     {"/business/company/founders", "/business/company", "/business"}
std::vector<std::string> DeriveHierarchy(const std::string& relation, std::size_t depth);

// Relation inventories for levels 0..M with child-to-parent links. NA has id
// 0 at every level and is its own ancestor; the remaining relations are
// numbered in lexicographic order.
class RelationHierarchy {
 public:
  RelationHierarchy() = default;
  // Builds the hierarchy from fine-grained relation strings (NA is added
  // when absent). Throws InputError for paths too short for `depth`.
  RelationHierarchy(const std::vector<std::string>& relations, std::size_t depth);

  std::size_t depth() const { return levels_.empty() ? 0 : levels_.size() - 1; }
  std::size_t num_levels() const { return levels_.size(); }
  std::size_t size(std::size_t level) const { return levels_.at(level).size(); }
  std::vector<std::size_t> level_sizes() const;

  const std::string& Name(std::size_t level, std::size_t id) const {
    return levels_.at(level).at(id);
  }
  bool Contains(std::size_t level, const std::string& name) const;
  std::size_t Id(std::size_t level, const std::string& name) const;

  // Level ids r0..rM of a fine-grained relation string.
  std::vector<std::size_t> Labels(const std::string& relation) const;
  // Level-l ancestor of a fine-grained id.
  std::size_t Ancestor(std::size_t level, std::size_t fine_id) const;

  const std::vector<std::vector<std::string>>& levels() const { return levels_; }

 private:
  std::vector<std::vector<std::string>> levels_;
  std::vector<std::unordered_map<std::string, std::size_t>> index_;
  // ancestors_[l][fine_id]
  std::vector<std::vector<std::size_t>> ancestors_;
};

}  // namespace cora

#endif  // CORA_HIERARCHY_H_
