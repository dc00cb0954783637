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

#ifndef DPAPSD_SHORTCUTS_HPP_
#define DPAPSD_SHORTCUTS_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dpapsd/decomposition.hpp"
#include "dpapsd/graph.hpp"
#include "dpapsd/privacy.hpp"

namespace dpapsd {

enum class Variant { kGeneral, kCovering };

std::string_view variant_name(Variant v);
Variant parse_variant(std::string_view name);

// One noisy release: the true distances of a fixed list of pairs inside a
// node subgraph G_b, in the order noise is drawn.
struct Release {
  std::size_t node = 0;
  ReleaseKind kind = ReleaseKind::kLeaf;
  std::vector<std::pair<Vertex, Vertex>> pairs;  // each with first < second
  std::vector<double> values;
};

// Portal sets P_b: the separator (general variant) or a greedy k-covering of
// it with hops measured inside G_b (covering variant). Empty for leaves.
std::vector<std::vector<Vertex>> portal_sets(const WeightedGraph& g, const DecompTree& t,
                                             Variant variant, std::size_t k);

// Within-separator pairs of P_b, cross-level pairs (P_parent \ P_b) x P_b,
// and all pairs of every leaf, with exact distances in G_b.
std::vector<Release> true_releases(const WeightedGraph& g, const DecompTree& t,
                                   const std::vector<std::vector<Vertex>>& portals);

// Largest number of nonempty releases computed over a subgraph containing
// any single edge.
std::size_t max_releases_per_edge(const WeightedGraph& g, const DecompTree& t,
                                  const std::vector<Release>& releases);

class ShortcutTable {
 public:
  ShortcutTable() = default;
  ShortcutTable(const DecompTree& t, Variant variant, std::size_t k,
                std::vector<std::vector<Vertex>> portals);

  // Throws std::logic_error if the key was already written.
  void insert(std::size_t node, Vertex x, Vertex y, double value);
  std::optional<double> lookup(std::size_t node, Vertex x, Vertex y) const;
  std::optional<double> lookup(std::string_view label, Vertex x, Vertex y) const;

  std::size_t size() const { return total_; }
  std::size_t num_nodes() const { return entries_.size(); }
  const std::string& label(std::size_t node) const { return labels_[node]; }
  const std::vector<Vertex>& portals(std::size_t node) const { return portals_[node]; }
  const std::vector<std::vector<Vertex>>& all_portals() const { return portals_; }
  Variant variant() const { return variant_; }
  std::size_t k() const { return k_; }

  // Entries of one node as (x, y, value), sorted by (x, y).
  std::vector<std::tuple<Vertex, Vertex, double>> sorted_entries(std::size_t node) const;

  DerivedNoiseParams noise;
  std::size_t portal_bound = 1;   // max |P_b|, at least 1
  std::size_t leaf_bound = 1;     // max(c, largest leaf)
  std::size_t releases_per_edge = 0;
  bool zero_noise = false;

  // 5 * 2^h * max(p^2, c^2) with p = portal_bound and c = leaf_bound.
  double entry_bound() const;

 private:
  static std::uint64_t key(Vertex x, Vertex y);

  Variant variant_ = Variant::kGeneral;
  std::size_t k_ = 0;
  std::vector<std::string> labels_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::vector<Vertex>> portals_;
  std::vector<std::unordered_map<std::uint64_t, double>> entries_;
  std::size_t total_ = 0;
};

struct ShortcutOptions {
  bool zero_noise = false;  // debug only: exact values, no privacy
};

ShortcutTable build_shortcuts_general(const WeightedGraph& g, const DecompTree& t,
                                      const PrivacyBudget& budget, std::uint64_t seed,
                                      const ShortcutOptions& options = {});

// Requires a declared weight cap W > 0 and k >= 1.
ShortcutTable build_shortcuts_covering(const WeightedGraph& g, const DecompTree& t,
                                       const PrivacyBudget& budget, std::size_t k,
                                       std::uint64_t seed, const ShortcutOptions& options = {});

// CSV "b,x,y,value" ("inf" for infinity).
void write_shortcuts_csv(std::ostream& out, const ShortcutTable& table);
void read_shortcuts_csv(std::istream& in, ShortcutTable& table);

}  // namespace dpapsd

#endif  // DPAPSD_SHORTCUTS_HPP_
