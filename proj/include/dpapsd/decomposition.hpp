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

#ifndef DPAPSD_DECOMPOSITION_HPP_
#define DPAPSD_DECOMPOSITION_HPP_

#include <array>
#include <cstddef>
#include <iosfwd>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dpapsd/graph.hpp"

namespace dpapsd {

enum class SeparatorStrategy {
  kPathMidpoint,
  kTreeCentroid,
  kGridAxis,
  kBfsLevel,
  kSuppliedTreeDecomposition,
};

std::string_view strategy_name(SeparatorStrategy s);
// Accepts the names printed by strategy_name; throws ParameterError.
SeparatorStrategy parse_strategy(std::string_view name);

// Vertex id = row * cols + col.
struct GridShape {
  std::size_t rows = 0;
  std::size_t cols = 0;
};

struct TreeDecomposition {
  std::vector<std::vector<Vertex>> bags;
  std::vector<std::pair<std::size_t, std::size_t>> tree_edges;
};

// Format: "nb", then nb lines "bag_id k v1..vk", then "i j" tree edges.
TreeDecomposition read_tree_decomposition(std::istream& in);

struct SeparatorConfig {
  SeparatorStrategy strategy = SeparatorStrategy::kBfsLevel;
  std::optional<GridShape> grid;
  std::shared_ptr<const TreeDecomposition> tree_decomposition;
};

struct SeparationParams {
  std::size_t p = std::numeric_limits<std::size_t>::max();
  double q = 2.0 / 3.0;
  double q_prime = 0.75;
  std::size_t leaf_size = 4;
};

struct SeparatorResult {
  std::vector<Vertex> separator;
  std::vector<Vertex> side_a;
  std::vector<Vertex> side_b;
};

// Checks p, q, q' and the component bounds on a single graph whose vertex
// set is the whole scope. Sides are formed by packing the components of
// V \ S largest-first onto the currently smaller side.
struct Separation {
  SeparatorResult parts;
  std::size_t max_part = 0;  // max(|A u S|, |B u S|)
  bool balanced = false;     // q and q' bounds (the cap p is checked separately)
  bool components_ok = false;  // every component of V \ S within q|V|
};
Separation split_by(const WeightedGraph& g, std::span<const Vertex> separator,
                    const SeparationParams& params);

// Candidate separators (local ids of g) proposed by a strategy. global_ids
// maps local ids of g to ids in the input graph (needed for grid
// coordinates and supplied bags). Throws StrategyError.
std::vector<std::vector<Vertex>> separator_candidates(const WeightedGraph& g,
                                                      std::span<const Vertex> global_ids,
                                                      const SeparatorConfig& config);

// Picks the best balanced candidate within the cap. Throws CapExceededError
// if only oversized candidates are balanced, NoSeparatorError if none are.
SeparatorResult choose_separator(const WeightedGraph& g,
                                 const std::vector<std::vector<Vertex>>& candidates,
                                 const SeparationParams& params, SeparatorStrategy strategy);

// Exhaustive search over all vertex subsets (only for tiny graphs).
std::optional<SeparatorResult> exhaustive_separator(const WeightedGraph& g,
                                                    const SeparationParams& params);
inline constexpr std::size_t kExhaustiveLimit = 16;

// Separator of a whole graph, in its local ids. Disconnected graphs get an
// empty separator if that balances, otherwise the largest component is cut.
SeparatorResult separate_graph(const WeightedGraph& g, std::span<const Vertex> global_ids,
                               const SeparatorConfig& config, const SeparationParams& params);

// Separator of the subgraph induced by scope, in the ids of g.
SeparatorResult find_separator(const WeightedGraph& g, std::span<const Vertex> scope,
                               const SeparatorConfig& config, const SeparationParams& params);

struct DecompNode {
  std::string label;               // path bitstring, "" for the root
  std::vector<Vertex> vertices;    // V_b, sorted
  std::vector<Vertex> separator;   // S_b, sorted, empty for leaves
  std::vector<EdgeId> edges;       // E(G_b), sorted
  int parent = -1;
  std::array<int, 2> children{-1, -1};

  bool is_leaf() const { return children[0] < 0; }
  std::size_t depth() const { return label.size(); }
};

// h = max(1, ceil(log_{1/q'}(n/c))).
std::size_t depth_bound(std::size_t n, std::size_t c, double q_prime);

class DecompTree {
 public:
  DecompTree() = default;
  DecompTree(std::size_t n, SeparationParams params, std::vector<DecompNode> nodes);

  std::size_t num_vertices() const { return n_; }
  const SeparationParams& params() const { return params_; }
  std::size_t size() const { return nodes_.size(); }
  const DecompNode& node(std::size_t i) const { return nodes_[i]; }
  const DecompNode& root() const { return nodes_.front(); }
  const std::vector<DecompNode>& nodes() const { return nodes_; }

  std::size_t h() const { return h_; }
  std::size_t max_depth() const;
  std::size_t max_separator_size() const;
  std::size_t max_leaf_size() const;
  std::optional<std::size_t> find(std::string_view label) const;

  friend bool operator==(const DecompTree& a, const DecompTree& b);

 private:
  std::size_t n_ = 0;
  SeparationParams params_;
  std::size_t h_ = 1;
  std::vector<DecompNode> nodes_;
};

// Edges of a child: parent edges with both endpoints in the child vertex
// set, minus edges with both endpoints in the parent separator.
std::vector<EdgeId> child_edges(const WeightedGraph& g, std::span<const EdgeId> parent_edges,
                                std::span<const Vertex> child_vertices,
                                std::span<const Vertex> parent_separator);

// Nodes are stored breadth-first; node 0 is the root.
DecompTree build_tree(const WeightedGraph& g, const SeparationParams& params,
                      const SeparatorConfig& config);

struct ValidationReport {
  std::vector<std::string> violations;
  std::vector<std::string> notes;
  std::size_t h = 0;
  std::size_t max_depth = 0;
  std::size_t max_edge_multiplicity = 0;

  bool ok() const { return violations.empty(); }
  std::string to_string() const;
};

ValidationReport validate_tree(const WeightedGraph& g, const DecompTree& t);

void write_tree_json(std::ostream& out, const DecompTree& t);
// Edge sets are recomputed from g.
DecompTree read_tree_json(std::istream& in, const WeightedGraph& g);

}  // namespace dpapsd

#endif  // DPAPSD_DECOMPOSITION_HPP_
