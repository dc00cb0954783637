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

#ifndef DPAPSD_COVERING_HPP_
#define DPAPSD_COVERING_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "dpapsd/decomposition.hpp"
#include "dpapsd/graph.hpp"

namespace dpapsd {

// A k-covering: every covered vertex has a center within `radius` hops.
struct Covering {
  std::vector<Vertex> centers;                       // sorted
  std::size_t radius = 0;
  std::vector<std::pair<Vertex, Vertex>> assignment;  // (vertex, center), sorted by vertex

  std::optional<Vertex> center_of(Vertex v) const;
};

// Greedy covering: the smallest uncovered vertex becomes a center and covers
// its k-ball. Hops are measured in the subgraph induced by scope.
Covering greedy_k_covering(const WeightedGraph& g, std::span<const Vertex> scope, std::size_t k);

// Covering of targets whose hops may pass through any vertex of g.
// Centers are targets; the smallest uncovered target opens the next ball.
Covering greedy_k_covering_through(const WeightedGraph& g, std::span<const Vertex> targets,
                                   std::size_t k);

// x + floor(n / (k + 1)) for a set of n vertices in x components.
inline std::size_t covering_size_bound(std::size_t n, std::size_t components, std::size_t k) {
  return components + n / (k + 1);
}

// Number of connected components of the subgraph induced by scope.
std::size_t count_components(const WeightedGraph& g, std::span<const Vertex> scope);

struct ClusterPartition {
  std::vector<std::vector<Vertex>> clusters;  // each sorted
  std::vector<Vertex> centers;                // centers[i] belongs to clusters[i]
  std::size_t d = 0;
};

// Each cluster is grown by BFS from its center through unclaimed vertices
// of the induced subgraph, up to d hops; the next center is the smallest
// unclaimed vertex. Clusters are connected with radius <= d.
ClusterPartition cluster_partition(const WeightedGraph& g, std::span<const Vertex> scope,
                                   std::size_t d);

struct Contraction {
  WeightedGraph quotient;                     // unit weights, one vertex per cluster
  std::vector<std::vector<Vertex>> members;   // supernode -> cluster
};

Contraction contract_clusters(const WeightedGraph& g, const ClusterPartition& partition);

struct SeparatorCovering {
  SeparatorResult separation;
  Covering covering;
};

// Separator of the contracted cluster graph lifted back to g, covered by the
// centers of its clusters. The lifted separation is always re-checked on g.
SeparatorCovering separator_covering(const WeightedGraph& g, std::span<const Vertex> scope,
                                     std::size_t d, const SeparatorConfig& config,
                                     const SeparationParams& params);

}  // namespace dpapsd

#endif  // DPAPSD_COVERING_HPP_
