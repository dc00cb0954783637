// Copyright 2026 The dpapsd Authors
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

#ifndef DPAPSD_APSD_HPP_
#define DPAPSD_APSD_HPP_

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "dpapsd/decomposition.hpp"
#include "dpapsd/graph.hpp"
#include "dpapsd/shortcuts.hpp"

namespace dpapsd {

struct QueryOptions {
  // Drop child memo tables once a parent is complete (saves memory in
  // apsd_all; later direct calls on dropped nodes throw).
  bool keep_intermediate = true;
};

// Recursive reconstruction over a decomposition tree and its shortcut table.
// Values are memoized per (node, unordered pair) and each is computed once.
// The tree and table must outlive the context.
class QueryContext {
 public:
  QueryContext(const DecompTree& tree, const ShortcutTable& table, QueryOptions options = {});

  // Estimate of the distance between s and t inside G_b. Infinity if either
  // vertex is not in V_b. Throws FailError if k > 0 and neither endpoint is
  // in the parent's portal set.
  double recursive_apsd(std::string_view label, Vertex s, Vertex t, unsigned k);
  double recursive_apsd(std::size_t node, Vertex s, Vertex t, unsigned k);

  DistanceMatrix apsd_all();
  double query_pair(Vertex s, Vertex t);

  // Number of (node, pair) values computed so far.
  std::uint64_t evaluations() const { return evaluations_; }

 private:
  struct NodeState {
    bool prepared = false;
    bool complete = false;
    bool released = false;
    std::size_t m = 0;
    std::vector<double> memo;                 // m x m, NaN = not computed
    std::vector<std::int32_t> child_index[2];  // local index in each child, -1 if absent
    std::vector<std::int32_t> portal_pos;      // position in P_b, -1 if absent
    std::vector<std::int32_t> parent_pos;      // position in P_parent, -1 if absent
    std::vector<std::uint32_t> portal_child[2];  // P_b as local indices of each child
    std::vector<double> within;                // |P| x |P|, zero diagonal
    std::vector<double> cross;                 // |P| x |P_parent|
  };

  NodeState& prepare(std::size_t node);
  double value(std::size_t node, std::size_t i, std::size_t j);
  double evaluate(std::size_t node, std::size_t i, std::size_t j);
  double shortcut(std::size_t node, std::size_t i, std::size_t j) const;
  bool is_shortcut(const NodeState& st, std::size_t node, std::size_t i, std::size_t j) const;
  void complete(std::size_t node);
  std::size_t local_index(std::size_t node, Vertex v) const;

  const DecompTree& tree_;
  const ShortcutTable& table_;
  QueryOptions options_;
  std::vector<NodeState> state_;
  std::uint64_t evaluations_ = 0;
};

}  // namespace dpapsd

#endif  // DPAPSD_APSD_HPP_
