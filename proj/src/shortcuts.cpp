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

#include "dpapsd/shortcuts.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "dpapsd/covering.hpp"
#include "dpapsd/errors.hpp"

namespace dpapsd {

namespace {

std::vector<Vertex> to_local(const Subgraph& sub, std::span<const Vertex> global) {
  std::vector<Vertex> out;
  out.reserve(global.size());
  for (Vertex v : global) out.push_back(*sub.local_id(v));
  return out;
}

ShortcutTable build(const WeightedGraph& g, const DecompTree& t, const PrivacyBudget& budget,
                    Variant variant, std::size_t k, std::uint64_t seed,
                    const ShortcutOptions& options) {
  ValidationReport report = validate_tree(g, t);
  if (!report.ok()) throw InputError("invalid decomposition tree: " + report.violations.front());

  auto portals = portal_sets(g, t, variant, k);
  ShortcutTable table(t, variant, k, portals);
  auto releases = true_releases(g, t, portals);

  for (const auto& p : portals) table.portal_bound = std::max(table.portal_bound, p.size());
  table.leaf_bound = std::max(t.params().leaf_size, t.max_leaf_size());
  double internal = 1.0, leaf = 1.0;
  if (budget.mode == NoiseMode::kGaussian) {
    internal = static_cast<double>(table.portal_bound);
    leaf = leaf_l2_sensitivity(table.leaf_bound);
  } else {
    leaf = leaf_l1_sensitivity(t.params().leaf_size);
    for (const auto& r : releases) {
      auto& target = r.kind == ReleaseKind::kLeaf ? leaf : internal;
      target = std::max(target, static_cast<double>(r.pairs.size()));
    }
  }
  table.noise = derive_noise_params(budget, t.h(), internal, leaf);
  table.releases_per_edge = max_releases_per_edge(g, t, releases);
  table.zero_noise = options.zero_noise;

  for (const auto& r : releases) {
    RngStream rng(seed, t.node(r.node).label, r.kind);
    const double scale =
        r.kind == ReleaseKind::kLeaf ? table.noise.sigma_leaf : table.noise.sigma_internal;
    for (std::size_t i = 0; i < r.pairs.size(); ++i) {
      double value = r.values[i];
      if (!options.zero_noise && std::isfinite(value)) {
        value += budget.mode == NoiseMode::kGaussian ? sample_gaussian(scale, rng)
                                                     : sample_laplace(scale, rng);
      }
      table.insert(r.node, r.pairs[i].first, r.pairs[i].second, value);
    }
  }
  return table;
}

}  // namespace

std::string_view variant_name(Variant v) { return v == Variant::kGeneral ? "general" : "covering"; }

Variant parse_variant(std::string_view name) {
  if (name == "general") return Variant::kGeneral;
  if (name == "covering") return Variant::kCovering;
  throw ParameterError("unknown variant '" + std::string(name) + "'");
}

std::vector<std::vector<Vertex>> portal_sets(const WeightedGraph& g, const DecompTree& t,
                                             Variant variant, std::size_t k) {
  std::vector<std::vector<Vertex>> out(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    const DecompNode& node = t.node(i);
    if (node.is_leaf() || node.separator.empty()) continue;
    if (variant == Variant::kGeneral) {
      out[i] = node.separator;
      continue;
    }
    // Each side gets centers reachable within k hops inside that child,
    // since the children drop the edges between separator vertices.
    for (int a : node.children) {
      const DecompNode& child = t.node(static_cast<std::size_t>(a));
      Subgraph sub = edge_subgraph(g, child.vertices, child.edges);
      Covering cover = greedy_k_covering_through(sub.graph, to_local(sub, node.separator), k);
      for (Vertex c : cover.centers) out[i].push_back(sub.to_parent[c]);
    }
    std::sort(out[i].begin(), out[i].end());
    out[i].erase(std::unique(out[i].begin(), out[i].end()), out[i].end());
  }
  return out;
}

std::vector<Release> true_releases(const WeightedGraph& g, const DecompTree& t,
                                   const std::vector<std::vector<Vertex>>& portals) {
  std::vector<Release> out;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const DecompNode& node = t.node(i);
    Subgraph sub = edge_subgraph(g, node.vertices, node.edges);
    if (node.is_leaf()) {
      Release r{i, ReleaseKind::kLeaf, {}, {}};
      const std::size_t m = node.vertices.size();
      for (Vertex x = 0; x < m; ++x) {
        auto dist = dijkstra(sub.graph, x);
        for (Vertex y = x + 1; y < m; ++y) {
          r.pairs.emplace_back(node.vertices[x], node.vertices[y]);
          r.values.push_back(dist[y]);
        }
      }
      out.push_back(std::move(r));
      continue;
    }
    const auto& p = portals[i];
    std::vector<std::vector<double>> from(p.size());
    for (std::size_t a = 0; a < p.size(); ++a) from[a] = dijkstra(sub.graph, *sub.local_id(p[a]));

    Release within{i, ReleaseKind::kWithinSeparator, {}, {}};
    for (std::size_t a = 0; a < p.size(); ++a) {
      for (std::size_t b = a + 1; b < p.size(); ++b) {
        within.pairs.emplace_back(p[a], p[b]);
        within.values.push_back(from[a][*sub.local_id(p[b])]);
      }
    }
    out.push_back(std::move(within));
    if (node.parent < 0) continue;
    Release cross{i, ReleaseKind::kCrossLevel, {}, {}};
    for (Vertex x : portals[node.parent]) {
      if (std::binary_search(p.begin(), p.end(), x)) continue;
      const Vertex lx = *sub.local_id(x);
      for (std::size_t b = 0; b < p.size(); ++b) {
        cross.pairs.emplace_back(std::min(x, p[b]), std::max(x, p[b]));
        cross.values.push_back(from[b][lx]);
      }
    }
    out.push_back(std::move(cross));
  }
  return out;
}

std::size_t max_releases_per_edge(const WeightedGraph& g, const DecompTree& t,
                                  const std::vector<Release>& releases) {
  std::vector<std::size_t> per_node(t.size(), 0);
  for (const auto& r : releases) {
    if (!r.pairs.empty()) ++per_node[r.node];
  }
  std::vector<std::size_t> per_edge(g.num_edges(), 0);
  for (std::size_t i = 0; i < t.size(); ++i) {
    for (EdgeId e : t.node(i).edges) per_edge[e] += per_node[i];
  }
  std::size_t best = 0;
  for (std::size_t c : per_edge) best = std::max(best, c);
  return best;
}

ShortcutTable::ShortcutTable(const DecompTree& t, Variant variant, std::size_t k,
                             std::vector<std::vector<Vertex>> portals)
    : variant_(variant), k_(k), portals_(std::move(portals)), entries_(t.size()) {
  if (portals_.size() != t.size()) throw InputError("one portal set per tree node required");
  labels_.reserve(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    labels_.push_back(t.node(i).label);
    index_.emplace(labels_.back(), i);
  }
}

std::uint64_t ShortcutTable::key(Vertex x, Vertex y) {
  if (x > y) std::swap(x, y);
  return (static_cast<std::uint64_t>(x) << 32) | y;
}

void ShortcutTable::insert(std::size_t node, Vertex x, Vertex y, double value) {
  if (x == y) throw std::logic_error("shortcut key needs two distinct vertices");
  if (std::isnan(value)) throw std::logic_error("NaN shortcut value");
  if (!entries_.at(node).emplace(key(x, y), value).second) {
    throw std::logic_error("shortcut (" + std::to_string(x) + "," + std::to_string(y) +
                           ") at b=" + labels_[node] + " written twice");
  }
  ++total_;
}

std::optional<double> ShortcutTable::lookup(std::size_t node, Vertex x, Vertex y) const {
  if (node >= entries_.size()) return std::nullopt;
  auto it = entries_[node].find(key(x, y));
  if (it == entries_[node].end()) return std::nullopt;
  return it->second;
}

std::optional<double> ShortcutTable::lookup(std::string_view label, Vertex x, Vertex y) const {
  auto it = index_.find(std::string(label));
  if (it == index_.end()) return std::nullopt;
  return lookup(it->second, x, y);
}

std::vector<std::tuple<Vertex, Vertex, double>> ShortcutTable::sorted_entries(
    std::size_t node) const {
  std::vector<std::tuple<Vertex, Vertex, double>> out;
  for (const auto& [k, v] : entries_.at(node)) {
    out.emplace_back(static_cast<Vertex>(k >> 32), static_cast<Vertex>(k & 0xffffffffu), v);
  }
  std::sort(out.begin(), out.end());
  return out;
}

double ShortcutTable::entry_bound() const {
  const double p = static_cast<double>(portal_bound);
  const double c = static_cast<double>(leaf_bound);
  return 5.0 * std::ldexp(1.0, static_cast<int>(noise.h)) * std::max(p * p, c * c);
}

ShortcutTable build_shortcuts_general(const WeightedGraph& g, const DecompTree& t,
                                      const PrivacyBudget& budget, std::uint64_t seed,
                                      const ShortcutOptions& options) {
  return build(g, t, budget, Variant::kGeneral, 0, seed, options);
}

ShortcutTable build_shortcuts_covering(const WeightedGraph& g, const DecompTree& t,
                                       const PrivacyBudget& budget, std::size_t k,
                                       std::uint64_t seed, const ShortcutOptions& options) {
  if (!(g.weight_cap() > 0.0)) {
    throw ParameterError("covering variant needs a declared weight cap W > 0");
  }
  if (k < 1) throw ParameterError("covering radius k must be at least 1");
  return build(g, t, budget, Variant::kCovering, k, seed, options);
}

void write_shortcuts_csv(std::ostream& out, const ShortcutTable& table) {
  out << "b,x,y,value\n";
  for (std::size_t i = 0; i < table.num_nodes(); ++i) {
    for (const auto& [x, y, v] : table.sorted_entries(i)) {
      out << table.label(i) << ',' << x << ',' << y << ',' << format_distance(v) << '\n';
    }
  }
}

void read_shortcuts_csv(std::istream& in, ShortcutTable& table) {
  std::string line;
  if (!std::getline(in, line) || line != "b,x,y,value") {
    throw InputError("shortcut CSV: missing header 'b,x,y,value'");
  }
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < table.num_nodes(); ++i) index.emplace(table.label(i), i);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string b, x, y, v;
    if (!std::getline(ss, b, ',') || !std::getline(ss, x, ',') || !std::getline(ss, y, ',') ||
        !std::getline(ss, v)) {
      throw InputError("shortcut CSV: malformed line '" + line + "'");
    }
    auto it = index.find(b);
    if (it == index.end()) throw InputError("shortcut CSV: unknown node label '" + b + "'");
    try {
      table.insert(it->second, static_cast<Vertex>(std::stoul(x)),
                   static_cast<Vertex>(std::stoul(y)), parse_distance(v));
    } catch (const std::logic_error& e) {
      throw InputError(std::string("shortcut CSV: ") + e.what());
    }
  }
}

}  // namespace dpapsd
