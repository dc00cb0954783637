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

#include <algorithm>
#include <bit>
#include <istream>
#include <numeric>
#include <set>
#include <string>
#include <tuple>

#include "dpapsd/decomposition.hpp"
#include "dpapsd/errors.hpp"

namespace dpapsd {

namespace {

constexpr double kSlack = 1e-9;

bool within(double size, double bound) { return size <= bound + kSlack; }

// Largest-first packing onto the currently smaller side (ties go to side a).
std::pair<std::size_t, std::size_t> pack_sizes(std::vector<std::size_t> sizes) {
  std::sort(sizes.rbegin(), sizes.rend());
  std::size_t a = 0, b = 0;
  for (std::size_t s : sizes) (a <= b ? a : b) += s;
  return {a, b};
}

bool is_connected(const WeightedGraph& g) {
  if (g.num_vertices() == 0) return true;
  auto hops = bfs_hops(g, 0);
  return std::none_of(hops.begin(), hops.end(),
                      [](std::uint32_t h) { return h == std::numeric_limits<std::uint32_t>::max(); });
}

bool balance_first(SeparatorStrategy s) { return s != SeparatorStrategy::kBfsLevel; }

std::vector<std::vector<Vertex>> path_candidates(const WeightedGraph& g) {
  const std::size_t n = g.num_vertices();
  bool is_path = g.num_edges() + 1 == n && is_connected(g);
  for (Vertex v = 0; is_path && v < n; ++v) is_path = g.degree(v) <= 2;
  if (!is_path) throw StrategyError("path-midpoint: scope is not a path");
  Vertex start = 0;
  for (Vertex v = 0; v < n; ++v) {
    if (g.degree(v) <= 1) {
      start = v;
      break;
    }
  }
  std::vector<Vertex> order{start};
  std::vector<char> seen(n, 0);
  seen[start] = 1;
  while (order.size() < n) {
    for (const Incidence& inc : g.neighbors(order.back())) {
      if (!seen[inc.to]) {
        seen[inc.to] = 1;
        order.push_back(inc.to);
        break;
      }
    }
  }
  const std::size_t lo = (n - 1) / 2, hi = n / 2;
  std::vector<std::vector<Vertex>> out{{order[lo]}};
  if (hi != lo) out.push_back({order[hi]});
  return out;
}

std::vector<std::vector<Vertex>> centroid_candidates(const WeightedGraph& g) {
  const std::size_t n = g.num_vertices();
  if (g.num_edges() + 1 != n || !is_connected(g)) {
    throw StrategyError("tree-centroid: scope is not a tree");
  }
  std::vector<int> parent(n, -1);
  std::vector<Vertex> order{0};
  std::vector<char> seen(n, 0);
  seen[0] = 1;
  for (std::size_t head = 0; head < order.size(); ++head) {
    for (const Incidence& inc : g.neighbors(order[head])) {
      if (!seen[inc.to]) {
        seen[inc.to] = 1;
        parent[inc.to] = static_cast<int>(order[head]);
        order.push_back(inc.to);
      }
    }
  }
  std::vector<std::size_t> sub(n, 1);
  for (std::size_t i = n; i-- > 1;) sub[parent[order[i]]] += sub[order[i]];
  Vertex best = 0;
  std::size_t best_part = std::numeric_limits<std::size_t>::max();
  for (Vertex v = 0; v < n; ++v) {
    std::vector<std::size_t> sizes;
    for (const Incidence& inc : g.neighbors(v)) {
      if (parent[inc.to] == static_cast<int>(v)) sizes.push_back(sub[inc.to]);
    }
    if (parent[v] >= 0) sizes.push_back(n - sub[v]);
    auto [a, b] = pack_sizes(sizes);
    std::size_t part = std::max(a, b) + 1;
    if (part < best_part) {
      best_part = part;
      best = v;
    }
  }
  return {{best}};
}

std::vector<std::vector<Vertex>> grid_candidates(const WeightedGraph& g,
                                                 std::span<const Vertex> global_ids,
                                                 const SeparatorConfig& config) {
  if (!config.grid) throw StrategyError("grid-axis: no grid shape supplied");
  const std::size_t cols = config.grid->cols;
  const std::size_t total = config.grid->rows * cols;
  std::size_t r0 = SIZE_MAX, r1 = 0, c0 = SIZE_MAX, c1 = 0;
  for (Vertex v : global_ids) {
    if (v >= total) throw StrategyError("grid-axis: vertex id outside the grid");
    r0 = std::min<std::size_t>(r0, v / cols);
    r1 = std::max<std::size_t>(r1, v / cols);
    c0 = std::min<std::size_t>(c0, v % cols);
    c1 = std::max<std::size_t>(c1, v % cols);
  }
  if (global_ids.empty() || (r1 - r0 + 1) * (c1 - c0 + 1) != global_ids.size()) {
    throw StrategyError("grid-axis: scope is not a full rectangle");
  }
  for (const Edge& e : g.edges()) {
    const std::size_t a = global_ids[e.u], b = global_ids[e.v];
    const std::size_t dr = a / cols > b / cols ? a / cols - b / cols : b / cols - a / cols;
    const std::size_t dc = a % cols > b % cols ? a % cols - b % cols : b % cols - a % cols;
    if (dr + dc != 1) throw StrategyError("grid-axis: edge between non-adjacent grid cells");
  }
  const std::size_t width = c1 - c0 + 1;
  // Local ids follow sorted global ids, so the rectangle is row-major.
  std::vector<std::vector<Vertex>> out;
  for (std::size_t r = r0; r <= r1; ++r) {
    std::vector<Vertex> line;
    for (std::size_t c = 0; c < width; ++c) line.push_back(static_cast<Vertex>((r - r0) * width + c));
    out.push_back(std::move(line));
  }
  for (std::size_t c = c0; c <= c1; ++c) {
    std::vector<Vertex> line;
    for (std::size_t r = r0; r <= r1; ++r) {
      line.push_back(static_cast<Vertex>((r - r0) * width + (c - c0)));
    }
    out.push_back(std::move(line));
  }
  return out;
}

constexpr std::size_t kAllRootsLimit = 64;
constexpr std::size_t kSpreadRoots = 6;

// Levels of BFS trees grown from several roots: every vertex for small
// graphs, otherwise vertex 0, the two ends of a double sweep and a few
// evenly spaced ids.
std::vector<std::vector<Vertex>> bfs_level_candidates(const WeightedGraph& g) {
  const std::size_t n = g.num_vertices();
  constexpr auto kUnreached = std::numeric_limits<std::uint32_t>::max();
  std::vector<Vertex> roots;
  if (n <= kAllRootsLimit) {
    roots.resize(n);
    std::iota(roots.begin(), roots.end(), Vertex{0});
  } else {
    auto farthest = [&](Vertex src) {
      auto hops = bfs_hops(g, src);
      Vertex best = src;
      for (Vertex v = 0; v < n; ++v) {
        if (hops[v] != kUnreached && hops[v] > hops[best]) best = v;
      }
      return best;
    };
    const Vertex a = farthest(0);
    roots = {0, a, farthest(a)};
    for (std::size_t i = 1; i <= kSpreadRoots; ++i) {
      roots.push_back(static_cast<Vertex>(i * n / (kSpreadRoots + 1)));
    }
  }
  std::set<std::vector<Vertex>> unique;
  std::vector<std::vector<Vertex>> out;
  for (Vertex root : roots) {
    auto hops = bfs_hops(g, root);
    std::vector<std::vector<Vertex>> levels;
    for (Vertex v = 0; v < n; ++v) {
      if (hops[v] == kUnreached) continue;
      if (hops[v] >= levels.size()) levels.resize(hops[v] + 1);
      levels[hops[v]].push_back(v);
    }
    for (auto& level : levels) {
      if (unique.insert(level).second) out.push_back(std::move(level));
    }
  }
  return out;
}

std::vector<std::vector<Vertex>> bag_candidates(std::span<const Vertex> global_ids,
                                                const SeparatorConfig& config) {
  if (!config.tree_decomposition) {
    throw StrategyError("supplied-tree-decomposition: no tree decomposition supplied");
  }
  std::set<std::vector<Vertex>> unique;
  for (const auto& bag : config.tree_decomposition->bags) {
    std::vector<Vertex> local;
    for (Vertex v : bag) {
      auto it = std::lower_bound(global_ids.begin(), global_ids.end(), v);
      if (it != global_ids.end() && *it == v) {
        local.push_back(static_cast<Vertex>(it - global_ids.begin()));
      }
    }
    std::sort(local.begin(), local.end());
    if (!local.empty()) unique.insert(std::move(local));
  }
  return {unique.begin(), unique.end()};
}

}  // namespace

std::string_view strategy_name(SeparatorStrategy s) {
  switch (s) {
    case SeparatorStrategy::kPathMidpoint: return "path-midpoint";
    case SeparatorStrategy::kTreeCentroid: return "tree-centroid";
    case SeparatorStrategy::kGridAxis: return "grid-axis";
    case SeparatorStrategy::kBfsLevel: return "bfs-level";
    case SeparatorStrategy::kSuppliedTreeDecomposition: return "supplied-tree-decomposition";
  }
  return "unknown";
}

SeparatorStrategy parse_strategy(std::string_view name) {
  for (auto s : {SeparatorStrategy::kPathMidpoint, SeparatorStrategy::kTreeCentroid,
                 SeparatorStrategy::kGridAxis, SeparatorStrategy::kBfsLevel,
                 SeparatorStrategy::kSuppliedTreeDecomposition}) {
    if (strategy_name(s) == name) return s;
  }
  throw ParameterError("unknown separator strategy '" + std::string(name) + "'");
}

TreeDecomposition read_tree_decomposition(std::istream& in) {
  TreeDecomposition td;
  std::size_t nb = 0;
  if (!(in >> nb)) throw InputError("tree decomposition: expected bag count");
  td.bags.resize(nb);
  std::vector<char> seen(nb, 0);
  for (std::size_t i = 0; i < nb; ++i) {
    std::size_t id = 0, k = 0;
    if (!(in >> id >> k)) throw InputError("tree decomposition: expected 'bag_id k'");
    if (id >= nb || seen[id]) throw InputError("tree decomposition: bad or repeated bag id");
    seen[id] = 1;
    td.bags[id].resize(k);
    for (auto& v : td.bags[id]) {
      if (!(in >> v)) throw InputError("tree decomposition: truncated bag");
    }
    std::sort(td.bags[id].begin(), td.bags[id].end());
  }
  std::size_t a = 0, b = 0;
  while (in >> a >> b) {
    if (a >= nb || b >= nb) throw InputError("tree decomposition: bag edge out of range");
    td.tree_edges.emplace_back(a, b);
  }
  if (!in.eof()) throw InputError("tree decomposition: malformed bag edge");
  return td;
}

Separation split_by(const WeightedGraph& g, std::span<const Vertex> separator,
                    const SeparationParams& params) {
  const std::size_t n = g.num_vertices();
  std::vector<char> in_s(n, 0);
  for (Vertex v : separator) {
    if (v >= n || in_s[v]) throw InputError("separator has an invalid or repeated vertex");
    in_s[v] = 1;
  }
  std::vector<std::vector<Vertex>> comps;
  std::vector<char> seen(in_s);
  for (Vertex s = 0; s < n; ++s) {
    if (seen[s]) continue;
    std::vector<Vertex> comp{s};
    seen[s] = 1;
    for (std::size_t head = 0; head < comp.size(); ++head) {
      for (const Incidence& inc : g.neighbors(comp[head])) {
        if (!seen[inc.to]) {
          seen[inc.to] = 1;
          comp.push_back(inc.to);
        }
      }
    }
    comps.push_back(std::move(comp));
  }
  // comps are discovered in order of smallest member; stable sort keeps it.
  std::stable_sort(comps.begin(), comps.end(),
                   [](const auto& a, const auto& b) { return a.size() > b.size(); });
  Separation out;
  bool comps_ok = true;
  for (const auto& comp : comps) {
    comps_ok = comps_ok && within(static_cast<double>(comp.size()), params.q * n);
    auto& side = out.parts.side_a.size() <= out.parts.side_b.size() ? out.parts.side_a
                                                                     : out.parts.side_b;
    side.insert(side.end(), comp.begin(), comp.end());
  }
  out.parts.separator.assign(separator.begin(), separator.end());
  std::sort(out.parts.separator.begin(), out.parts.separator.end());
  std::sort(out.parts.side_a.begin(), out.parts.side_a.end());
  std::sort(out.parts.side_b.begin(), out.parts.side_b.end());
  out.max_part = std::max(out.parts.side_a.size(), out.parts.side_b.size()) + separator.size();
  out.components_ok = comps_ok;
  out.balanced = comps_ok && within(static_cast<double>(out.max_part), params.q_prime * n);
  return out;
}

std::vector<std::vector<Vertex>> separator_candidates(const WeightedGraph& g,
                                                      std::span<const Vertex> global_ids,
                                                      const SeparatorConfig& config) {
  if (global_ids.size() != g.num_vertices()) throw InputError("global id map size mismatch");
  switch (config.strategy) {
    case SeparatorStrategy::kPathMidpoint: return path_candidates(g);
    case SeparatorStrategy::kTreeCentroid: return centroid_candidates(g);
    case SeparatorStrategy::kGridAxis: return grid_candidates(g, global_ids, config);
    case SeparatorStrategy::kBfsLevel: return bfs_level_candidates(g);
    case SeparatorStrategy::kSuppliedTreeDecomposition: return bag_candidates(global_ids, config);
  }
  throw StrategyError("unknown strategy");
}

namespace {

template <typename Eval>
SeparatorResult choose_with(const std::vector<std::vector<Vertex>>& candidates,
                            const SeparationParams& params, SeparatorStrategy strategy,
                            Eval&& eval) {
  std::optional<Separation> best;
  std::size_t smallest_valid = 0;
  bool any_valid = false;
  auto key = [&](const Separation& s) {
    const std::size_t k = s.parts.separator.size();
    return balance_first(strategy) ? std::make_tuple(s.max_part, k, std::cref(s.parts.separator))
                                   : std::make_tuple(k, s.max_part, std::cref(s.parts.separator));
  };
  for (const auto& cand : candidates) {
    Separation s = eval(cand);
    if (!s.balanced) continue;
    if (!any_valid || cand.size() < smallest_valid) smallest_valid = cand.size();
    any_valid = true;
    if (cand.size() > params.p) continue;
    if (!best || key(s) < key(*best)) best = std::move(s);
  }
  if (best) return std::move(best->parts);
  if (any_valid) {
    throw CapExceededError("smallest balanced separator has " + std::to_string(smallest_valid) +
                           " vertices, above the cap p=" + std::to_string(params.p));
  }
  throw NoSeparatorError(std::string(strategy_name(strategy)) +
                         ": no balanced separator among " + std::to_string(candidates.size()) +
                         " candidates");
}

// Grid lines split the rectangle into the cells before and after the line,
// which keeps both children rectangular.
SeparatorResult grid_separate(const WeightedGraph& g, std::span<const Vertex> global_ids,
                              const SeparatorConfig& config, const SeparationParams& params) {
  const auto candidates = grid_candidates(g, global_ids, config);
  const std::size_t cols = config.grid->cols;
  const std::size_t n = g.num_vertices();
  std::size_t c0 = SIZE_MAX, c1 = 0;
  for (Vertex v : global_ids) {
    c0 = std::min<std::size_t>(c0, v % cols);
    c1 = std::max<std::size_t>(c1, v % cols);
  }
  const std::size_t width = c1 - c0 + 1;
  auto eval = [&](const std::vector<Vertex>& cand) {
    Separation s = split_by(g, cand, params);
    const Vertex first = global_ids[cand.front()];
    const bool row_line = cand.size() == width &&
                          std::all_of(cand.begin(), cand.end(), [&](Vertex v) {
                            return global_ids[v] / cols == first / cols;
                          });
    std::vector<char> in_s(n, 0);
    for (Vertex v : cand) in_s[v] = 1;
    s.parts.side_a.clear();
    s.parts.side_b.clear();
    for (Vertex v = 0; v < n; ++v) {
      if (in_s[v]) continue;
      const std::size_t gv = global_ids[v];
      const bool before = row_line ? gv / cols < first / cols : gv % cols < first % cols;
      (before ? s.parts.side_a : s.parts.side_b).push_back(v);
    }
    s.max_part = std::max(s.parts.side_a.size(), s.parts.side_b.size()) + cand.size();
    s.balanced = s.components_ok &&
                 within(static_cast<double>(s.max_part), params.q_prime * static_cast<double>(n));
    return s;
  };
  return choose_with(candidates, params, config.strategy, eval);
}

}  // namespace

SeparatorResult choose_separator(const WeightedGraph& g,
                                 const std::vector<std::vector<Vertex>>& candidates,
                                 const SeparationParams& params, SeparatorStrategy strategy) {
  return choose_with(candidates, params, strategy,
                     [&](const std::vector<Vertex>& cand) { return split_by(g, cand, params); });
}

std::optional<SeparatorResult> exhaustive_separator(const WeightedGraph& g,
                                                    const SeparationParams& params) {
  const std::size_t n = g.num_vertices();
  if (n > kExhaustiveLimit) throw ParameterError("exhaustive separator search limited to 16 vertices");
  std::optional<Separation> best;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (static_cast<std::size_t>(std::popcount(mask)) > params.p) continue;
    std::vector<Vertex> cand;
    for (Vertex v = 0; v < n; ++v) {
      if (mask & (1u << v)) cand.push_back(v);
    }
    Separation s = split_by(g, cand, params);
    if (!s.balanced) continue;
    auto key = [](const Separation& x) {
      return std::make_tuple(x.max_part, x.parts.separator.size(), std::cref(x.parts.separator));
    };
    if (!best || key(s) < key(*best)) best = std::move(s);
  }
  if (!best) return std::nullopt;
  return std::move(best->parts);
}

// Separator of a graph whose vertices are the whole scope, in local ids.
SeparatorResult separate_graph(const WeightedGraph& g, std::span<const Vertex> global_ids,
                         const SeparatorConfig& config, const SeparationParams& params) {
  if (g.num_vertices() == 0) throw InputError("cannot separate an empty scope");
  if (config.strategy == SeparatorStrategy::kGridAxis) {
    return grid_separate(g, global_ids, config, params);
  }
  auto comps = connected_components(g);
  if (comps.size() == 1) {
    return choose_separator(g, separator_candidates(g, global_ids, config), params,
                            config.strategy);
  }
  Separation empty = split_by(g, {}, params);
  if (empty.balanced) return empty.parts;
  // Bags are defined on the whole scope, connected or not.
  if (config.strategy == SeparatorStrategy::kSuppliedTreeDecomposition) {
    return choose_separator(g, separator_candidates(g, global_ids, config), params,
                            config.strategy);
  }
  const auto& largest = *std::max_element(
      comps.begin(), comps.end(),
      [](const auto& a, const auto& b) { return a.size() < b.size(); });
  Subgraph comp = induced_subgraph(g, largest);
  std::vector<Vertex> comp_globals;
  for (Vertex v : comp.to_parent) comp_globals.push_back(global_ids[v]);
  auto local = separator_candidates(comp.graph, comp_globals, config);
  for (auto& cand : local) {
    for (Vertex& v : cand) v = comp.to_parent[v];
  }
  return choose_separator(g, local, params, config.strategy);
}

SeparatorResult find_separator(const WeightedGraph& g, std::span<const Vertex> scope,
                               const SeparatorConfig& config, const SeparationParams& params) {
  Subgraph sub = induced_subgraph(g, scope);
  SeparatorResult local = separate_graph(sub.graph, sub.to_parent, config, params);
  for (auto* part : {&local.separator, &local.side_a, &local.side_b}) {
    for (Vertex& v : *part) v = sub.to_parent[v];
  }
  return local;
}

}  // namespace dpapsd
