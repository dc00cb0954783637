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

#include "dpapsd/covering.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <set>

#include "dpapsd/errors.hpp"

namespace dpapsd {

namespace {

constexpr auto kUnset = std::numeric_limits<std::uint32_t>::max();

}  // namespace

std::optional<Vertex> Covering::center_of(Vertex v) const {
  auto it = std::lower_bound(assignment.begin(), assignment.end(), v,
                             [](const auto& a, Vertex x) { return a.first < x; });
  if (it == assignment.end() || it->first != v) return std::nullopt;
  return it->second;
}

Covering greedy_k_covering(const WeightedGraph& g, std::span<const Vertex> scope, std::size_t k) {
  Covering out;
  out.radius = k;
  if (scope.empty()) return out;
  Subgraph sub = induced_subgraph(g, scope);
  const std::size_t n = sub.graph.num_vertices();
  std::vector<std::uint32_t> center(n, kUnset);
  for (Vertex v = 0; v < n; ++v) {
    if (center[v] != kUnset) continue;
    out.centers.push_back(sub.to_parent[v]);
    for (Vertex u : hop_ball(sub.graph, v, k)) {
      if (center[u] == kUnset) center[u] = v;
    }
  }
  out.assignment.reserve(n);
  for (Vertex v = 0; v < n; ++v) out.assignment.emplace_back(sub.to_parent[v], sub.to_parent[center[v]]);
  return out;
}

Covering greedy_k_covering_through(const WeightedGraph& g, std::span<const Vertex> targets,
                                   std::size_t k) {
  Covering out;
  out.radius = k;
  std::vector<Vertex> sorted(targets.begin(), targets.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end() ||
      (!sorted.empty() && sorted.back() >= g.num_vertices())) {
    throw InputError("covering targets must be distinct vertices of the graph");
  }
  std::vector<std::uint32_t> center(g.num_vertices(), kUnset);
  std::vector<char> is_target(g.num_vertices(), 0);
  for (Vertex v : sorted) is_target[v] = 1;
  for (Vertex v : sorted) {
    if (center[v] != kUnset) continue;
    out.centers.push_back(v);
    for (Vertex u : hop_ball(g, v, k)) {
      if (is_target[u] && center[u] == kUnset) center[u] = v;
    }
  }
  out.assignment.reserve(sorted.size());
  for (Vertex v : sorted) out.assignment.emplace_back(v, center[v]);
  return out;
}

std::size_t count_components(const WeightedGraph& g, std::span<const Vertex> scope) {
  if (scope.empty()) return 0;
  return connected_components(induced_subgraph(g, scope).graph).size();
}

ClusterPartition cluster_partition(const WeightedGraph& g, std::span<const Vertex> scope,
                                   std::size_t d) {
  if (d == 0) throw ParameterError("cluster diameter parameter d must be at least 1");
  ClusterPartition out;
  out.d = d;
  if (scope.empty()) return out;
  Subgraph sub = induced_subgraph(g, scope);
  const std::size_t n = sub.graph.num_vertices();
  std::vector<char> claimed(n, 0);
  std::vector<std::uint32_t> hops(n, kUnset);
  for (Vertex c = 0; c < n; ++c) {
    if (claimed[c]) continue;
    std::vector<Vertex> cluster{c};
    claimed[c] = 1;
    hops[c] = 0;
    for (std::size_t head = 0; head < cluster.size(); ++head) {
      Vertex u = cluster[head];
      if (hops[u] >= d) continue;
      for (const Incidence& inc : sub.graph.neighbors(u)) {
        if (!claimed[inc.to]) {
          claimed[inc.to] = 1;
          hops[inc.to] = hops[u] + 1;
          cluster.push_back(inc.to);
        }
      }
    }
    for (Vertex& v : cluster) v = sub.to_parent[v];
    std::sort(cluster.begin(), cluster.end());
    out.centers.push_back(sub.to_parent[c]);
    out.clusters.push_back(std::move(cluster));
  }
  return out;
}

Contraction contract_clusters(const WeightedGraph& g, const ClusterPartition& partition) {
  const std::size_t s = partition.clusters.size();
  std::vector<std::uint32_t> owner(g.num_vertices(), kUnset);
  for (std::uint32_t i = 0; i < s; ++i) {
    for (Vertex v : partition.clusters[i]) {
      if (v >= g.num_vertices() || owner[v] != kUnset) {
        throw InputError("cluster partition has an invalid or repeated vertex");
      }
      owner[v] = i;
    }
  }
  std::set<std::pair<Vertex, Vertex>> pairs;
  for (const Edge& e : g.edges()) {
    const auto a = owner[e.u], b = owner[e.v];
    if (a == kUnset || b == kUnset || a == b) continue;
    pairs.emplace(std::min(a, b), std::max(a, b));
  }
  std::vector<Edge> edges;
  for (auto [a, b] : pairs) edges.push_back({a, b, 1.0});
  return {WeightedGraph(s, std::move(edges)), partition.clusters};
}

SeparatorCovering separator_covering(const WeightedGraph& g, std::span<const Vertex> scope,
                                     std::size_t d, const SeparatorConfig& config,
                                     const SeparationParams& params) {
  if (d == 0) throw ParameterError("covering radius d must be at least 1");
  SeparatorCovering out;
  if (scope.size() <= params.leaf_size) {
    out.separation.separator.assign(scope.begin(), scope.end());
    std::sort(out.separation.separator.begin(), out.separation.separator.end());
    out.covering = greedy_k_covering(g, scope, d);
    return out;
  }
  Subgraph sub = induced_subgraph(g, scope);
  std::vector<Vertex> all(sub.graph.num_vertices());
  std::iota(all.begin(), all.end(), Vertex{0});
  ClusterPartition part = cluster_partition(sub.graph, all, d);
  Contraction con = contract_clusters(sub.graph, part);

  std::vector<Vertex> ids(con.quotient.num_vertices());
  std::iota(ids.begin(), ids.end(), Vertex{0});
  std::vector<std::vector<Vertex>> super_cands;
  auto comps = connected_components(con.quotient);
  if (comps.size() == 1) {
    super_cands = separator_candidates(con.quotient, ids, config);
  } else {
    super_cands.push_back({});
    const auto& largest = *std::max_element(
        comps.begin(), comps.end(), [](const auto& a, const auto& b) { return a.size() < b.size(); });
    Subgraph comp = induced_subgraph(con.quotient, largest);
    for (auto cand : separator_candidates(comp.graph, comp.to_parent, config)) {
      for (Vertex& v : cand) v = comp.to_parent[v];
      super_cands.push_back(std::move(cand));
    }
  }
  std::vector<std::vector<Vertex>> lifted;
  for (const auto& cand : super_cands) {
    std::vector<Vertex> set;
    for (Vertex c : cand) set.insert(set.end(), part.clusters[c].begin(), part.clusters[c].end());
    std::sort(set.begin(), set.end());
    lifted.push_back(std::move(set));
  }
  SeparatorResult chosen = choose_separator(sub.graph, lifted, params, config.strategy);
  const auto which = static_cast<std::size_t>(
      std::find(lifted.begin(), lifted.end(), chosen.separator) - lifted.begin());

  for (auto* list : {&chosen.separator, &chosen.side_a, &chosen.side_b}) {
    for (Vertex& v : *list) v = sub.to_parent[v];
  }
  out.separation = std::move(chosen);
  out.covering.radius = d;
  for (Vertex c : super_cands[which]) {
    const Vertex center = sub.to_parent[part.centers[c]];
    out.covering.centers.push_back(center);
    for (Vertex v : part.clusters[c]) out.covering.assignment.emplace_back(sub.to_parent[v], center);
  }
  std::sort(out.covering.centers.begin(), out.covering.centers.end());
  std::sort(out.covering.assignment.begin(), out.covering.assignment.end());
  return out;
}

}  // namespace dpapsd
