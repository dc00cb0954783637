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

#ifndef DPAPSD_GRAPH_HPP_
#define DPAPSD_GRAPH_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace dpapsd {

using Vertex = std::uint32_t;
using EdgeId = std::uint32_t;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct Edge {
  Vertex u = 0;
  Vertex v = 0;
  double w = 0.0;
};

struct Incidence {
  Vertex to = 0;
  EdgeId edge = 0;
};

// Undirected graph on vertices 0..n-1 with nonnegative edge weights.
// The topology is public; the weights are the private data.
class WeightedGraph {
 public:
  WeightedGraph() = default;
  // Throws InputError on out-of-range ids, self-loops, duplicate pairs,
  // negative or non-finite weights, or weights above a declared cap.
  // weight_cap == 0 means uncapped.
  WeightedGraph(std::size_t n, std::vector<Edge> edges, double weight_cap = 0.0);

  std::size_t num_vertices() const { return n_; }
  std::size_t num_edges() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(EdgeId id) const { return edges_[id]; }
  double weight_cap() const { return weight_cap_; }

  std::span<const Incidence> neighbors(Vertex v) const {
    return {incidences_.data() + offsets_[v], incidences_.data() + offsets_[v + 1]};
  }
  std::size_t degree(Vertex v) const { return offsets_[v + 1] - offsets_[v]; }

  std::optional<EdgeId> find_edge(Vertex u, Vertex v) const;

  // Same topology and cap, new weights (validated).
  WeightedGraph with_weights(std::span<const double> weights) const;

  friend bool operator==(const WeightedGraph& a, const WeightedGraph& b);

 private:
  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  double weight_cap_ = 0.0;
  std::vector<std::size_t> offsets_{0};
  std::vector<Incidence> incidences_;
};

// Dense symmetric distance matrix over a sorted set of (global) vertex ids.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  // Matrix over vertices 0..n-1, initialised to infinity off the diagonal.
  explicit DistanceMatrix(std::size_t n);
  // Matrix over the given sorted, distinct vertex ids.
  explicit DistanceMatrix(std::vector<Vertex> vertices);

  std::size_t size() const { return vertices_.size(); }
  const std::vector<Vertex>& vertices() const { return vertices_; }

  double& at(std::size_t i, std::size_t j) { return d_[i * vertices_.size() + j]; }
  double at(std::size_t i, std::size_t j) const { return d_[i * vertices_.size() + j]; }
  const double* row(std::size_t i) const { return d_.data() + i * vertices_.size(); }

  std::optional<std::size_t> index_of(Vertex v) const;
  // Distance by global ids; infinity if either vertex is absent.
  double distance(Vertex x, Vertex y) const;

 private:
  bool identity_ids_ = true;
  std::vector<Vertex> vertices_;
  std::vector<double> d_;
};

// A subgraph re-indexed to local ids 0..k-1, with maps back to the parent.
struct Subgraph {
  WeightedGraph graph;
  std::vector<Vertex> to_parent;      // sorted
  std::vector<EdgeId> edge_to_parent;

  std::optional<Vertex> local_id(Vertex parent) const;
};

struct NeighborEdit {
  Vertex u = 0;
  Vertex v = 0;
  double delta = 0.0;
};

// Single-source shortest paths (Dijkstra). Unreached vertices get infinity.
std::vector<double> dijkstra(const WeightedGraph& g, Vertex src);

// Unweighted hop distances from src; unreached vertices get max().
std::vector<std::uint32_t> bfs_hops(const WeightedGraph& g, Vertex src);

DistanceMatrix exact_apsd(const WeightedGraph& g, unsigned threads = 0);

// Exact APSD inside the subgraph induced by s (sorted or not, duplicates
// rejected). Throws InputError for ids >= n.
DistanceMatrix exact_subgraph_apsd(const WeightedGraph& g, std::span<const Vertex> s);

// Vertices within k hops of src, sorted.
std::vector<Vertex> hop_ball(const WeightedGraph& g, Vertex src, std::size_t k);

WeightedGraph make_neighbor(const WeightedGraph& g, const NeighborEdit& edit);

// Induced subgraph on a set of parent vertices.
Subgraph induced_subgraph(const WeightedGraph& g, std::span<const Vertex> vertices);
// Subgraph on a vertex set using only the listed parent edges (both
// endpoints must lie in the set).
Subgraph edge_subgraph(const WeightedGraph& g, std::span<const Vertex> vertices,
                       std::span<const EdgeId> edges);

// Connected components as sorted vertex lists, ordered by smallest member.
std::vector<std::vector<Vertex>> connected_components(const WeightedGraph& g);

// Text format: "n m W" then m lines "u v w".
WeightedGraph read_graph(std::istream& in);
void write_graph(std::ostream& out, const WeightedGraph& g);

// Formats a distance with round-trip precision, "inf" for infinity.
std::string format_distance(double d);
double parse_distance(const std::string& s);

}  // namespace dpapsd

#endif  // DPAPSD_GRAPH_HPP_
