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

#include "dpapsd/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <istream>
#include <numeric>
#include <ostream>
#include <queue>
#include <sstream>
#include <string>
#include <thread>
#include <unordered_set>
#include <utility>

#include "dpapsd/errors.hpp"

namespace dpapsd {

namespace {

std::uint64_t pair_key(Vertex u, Vertex v) {
  if (u > v) std::swap(u, v);
  return (static_cast<std::uint64_t>(u) << 32) | v;
}

void check_weight(double w, double cap) {
  if (!std::isfinite(w) || w < 0.0) {
    throw InputError("edge weight must be finite and nonnegative, got " + std::to_string(w));
  }
  if (cap > 0.0 && w > cap) {
    throw InputError("edge weight " + std::to_string(w) + " exceeds declared cap " +
                     std::to_string(cap));
  }
}

}  // namespace

WeightedGraph::WeightedGraph(std::size_t n, std::vector<Edge> edges, double weight_cap)
    : n_(n), edges_(std::move(edges)), weight_cap_(weight_cap) {
  if (!std::isfinite(weight_cap) || weight_cap < 0.0) {
    throw InputError("weight cap must be finite and nonnegative");
  }
  if (n > std::numeric_limits<Vertex>::max()) throw InputError("too many vertices");
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(edges_.size() * 2);
  std::vector<std::size_t> deg(n, 0);
  for (const Edge& e : edges_) {
    if (e.u >= n || e.v >= n) {
      throw InputError("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                       ") has a vertex id >= n=" + std::to_string(n));
    }
    if (e.u == e.v) throw InputError("self-loop at vertex " + std::to_string(e.u));
    if (!seen.insert(pair_key(e.u, e.v)).second) {
      throw InputError("duplicate edge (" + std::to_string(e.u) + "," + std::to_string(e.v) + ")");
    }
    check_weight(e.w, weight_cap_);
    ++deg[e.u];
    ++deg[e.v];
  }
  offsets_.assign(n + 1, 0);
  for (std::size_t v = 0; v < n; ++v) offsets_[v + 1] = offsets_[v] + deg[v];
  incidences_.resize(offsets_[n]);
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (EdgeId id = 0; id < edges_.size(); ++id) {
    const Edge& e = edges_[id];
    incidences_[fill[e.u]++] = {e.v, id};
    incidences_[fill[e.v]++] = {e.u, id};
  }
  for (std::size_t v = 0; v < n; ++v) {
    std::sort(incidences_.begin() + offsets_[v], incidences_.begin() + offsets_[v + 1],
              [](const Incidence& a, const Incidence& b) { return a.to < b.to; });
  }
}

std::optional<EdgeId> WeightedGraph::find_edge(Vertex u, Vertex v) const {
  if (u >= n_ || v >= n_) return std::nullopt;
  auto nb = neighbors(u);
  auto it = std::lower_bound(nb.begin(), nb.end(), v,
                             [](const Incidence& a, Vertex x) { return a.to < x; });
  if (it == nb.end() || it->to != v) return std::nullopt;
  return it->edge;
}

WeightedGraph WeightedGraph::with_weights(std::span<const double> weights) const {
  if (weights.size() != edges_.size()) throw InputError("weight vector size mismatch");
  WeightedGraph out = *this;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    check_weight(weights[i], weight_cap_);
    out.edges_[i].w = weights[i];
  }
  return out;
}

bool operator==(const WeightedGraph& a, const WeightedGraph& b) {
  if (a.n_ != b.n_ || a.weight_cap_ != b.weight_cap_ || a.edges_.size() != b.edges_.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.edges_.size(); ++i) {
    const Edge& x = a.edges_[i];
    const Edge& y = b.edges_[i];
    if (x.u != y.u || x.v != y.v || x.w != y.w) return false;
  }
  return true;
}

DistanceMatrix::DistanceMatrix(std::size_t n)
    : identity_ids_(true), vertices_(n), d_(n * n, kInfinity) {
  std::iota(vertices_.begin(), vertices_.end(), Vertex{0});
  for (std::size_t i = 0; i < n; ++i) at(i, i) = 0.0;
}

DistanceMatrix::DistanceMatrix(std::vector<Vertex> vertices) : vertices_(std::move(vertices)) {
  for (std::size_t i = 1; i < vertices_.size(); ++i) {
    if (vertices_[i - 1] >= vertices_[i]) throw InputError("vertex ids must be sorted and distinct");
  }
  identity_ids_ = vertices_.empty() || vertices_.back() + 1 == vertices_.size();
  const std::size_t k = vertices_.size();
  d_.assign(k * k, kInfinity);
  for (std::size_t i = 0; i < k; ++i) at(i, i) = 0.0;
}

std::optional<std::size_t> DistanceMatrix::index_of(Vertex v) const {
  if (identity_ids_) {
    if (v < vertices_.size()) return v;
    return std::nullopt;
  }
  auto it = std::lower_bound(vertices_.begin(), vertices_.end(), v);
  if (it == vertices_.end() || *it != v) return std::nullopt;
  return static_cast<std::size_t>(it - vertices_.begin());
}

double DistanceMatrix::distance(Vertex x, Vertex y) const {
  auto i = index_of(x);
  auto j = index_of(y);
  if (!i || !j) return kInfinity;
  return at(*i, *j);
}

std::optional<Vertex> Subgraph::local_id(Vertex parent) const {
  auto it = std::lower_bound(to_parent.begin(), to_parent.end(), parent);
  if (it == to_parent.end() || *it != parent) return std::nullopt;
  return static_cast<Vertex>(it - to_parent.begin());
}

std::vector<double> dijkstra(const WeightedGraph& g, Vertex src) {
  std::vector<double> dist(g.num_vertices(), kInfinity);
  using Item = std::pair<double, Vertex>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[src] = 0.0;
  pq.push({0.0, src});
  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (d > dist[u]) continue;
    for (const Incidence& inc : g.neighbors(u)) {
      double nd = d + g.edge(inc.edge).w;
      if (nd < dist[inc.to]) {
        dist[inc.to] = nd;
        pq.push({nd, inc.to});
      }
    }
  }
  return dist;
}

std::vector<std::uint32_t> bfs_hops(const WeightedGraph& g, Vertex src) {
  constexpr auto kUnreached = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> hops(g.num_vertices(), kUnreached);
  std::vector<Vertex> queue{src};
  hops[src] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    Vertex u = queue[head];
    for (const Incidence& inc : g.neighbors(u)) {
      if (hops[inc.to] == kUnreached) {
        hops[inc.to] = hops[u] + 1;
        queue.push_back(inc.to);
      }
    }
  }
  return hops;
}

DistanceMatrix exact_apsd(const WeightedGraph& g, unsigned threads) {
  const std::size_t n = g.num_vertices();
  DistanceMatrix out(n);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
  auto work = [&](std::size_t begin, std::size_t step) {
    for (std::size_t s = begin; s < n; s += step) {
      auto dist = dijkstra(g, static_cast<Vertex>(s));
      std::copy(dist.begin(), dist.end(), &out.at(s, 0));
    }
  };
  if (threads <= 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t, threads);
    for (auto& th : pool) th.join();
  }
  return out;
}

Subgraph induced_subgraph(const WeightedGraph& g, std::span<const Vertex> vertices) {
  std::vector<Vertex> sorted(vertices.begin(), vertices.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw InputError("vertex set contains duplicates");
  }
  if (!sorted.empty() && sorted.back() >= g.num_vertices()) {
    throw InputError("vertex id " + std::to_string(sorted.back()) + " >= n");
  }
  std::vector<EdgeId> edges;
  std::vector<char> in(g.num_vertices(), 0);
  for (Vertex v : sorted) in[v] = 1;
  for (Vertex v : sorted) {
    for (const Incidence& inc : g.neighbors(v)) {
      if (inc.to > v && in[inc.to]) edges.push_back(inc.edge);
    }
  }
  std::sort(edges.begin(), edges.end());
  return edge_subgraph(g, sorted, edges);
}

Subgraph edge_subgraph(const WeightedGraph& g, std::span<const Vertex> vertices,
                       std::span<const EdgeId> edges) {
  Subgraph sub;
  sub.to_parent.assign(vertices.begin(), vertices.end());
  std::sort(sub.to_parent.begin(), sub.to_parent.end());
  std::vector<Edge> local;
  local.reserve(edges.size());
  for (EdgeId id : edges) {
    const Edge& e = g.edge(id);
    auto a = sub.local_id(e.u);
    auto b = sub.local_id(e.v);
    if (!a || !b) throw InputError("edge endpoint outside the subgraph vertex set");
    local.push_back({*a, *b, e.w});
  }
  sub.edge_to_parent.assign(edges.begin(), edges.end());
  sub.graph = WeightedGraph(sub.to_parent.size(), std::move(local), g.weight_cap());
  return sub;
}

DistanceMatrix exact_subgraph_apsd(const WeightedGraph& g, std::span<const Vertex> s) {
  Subgraph sub = induced_subgraph(g, s);
  DistanceMatrix out(sub.to_parent);
  for (Vertex i = 0; i < sub.to_parent.size(); ++i) {
    auto dist = dijkstra(sub.graph, i);
    std::copy(dist.begin(), dist.end(), &out.at(i, 0));
  }
  return out;
}

std::vector<Vertex> hop_ball(const WeightedGraph& g, Vertex src, std::size_t k) {
  if (src >= g.num_vertices()) throw InputError("source vertex out of range");
  std::vector<std::uint32_t> hops(g.num_vertices(), std::numeric_limits<std::uint32_t>::max());
  std::vector<Vertex> queue{src};
  hops[src] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    Vertex u = queue[head];
    if (hops[u] >= k) continue;
    for (const Incidence& inc : g.neighbors(u)) {
      if (hops[inc.to] == std::numeric_limits<std::uint32_t>::max()) {
        hops[inc.to] = hops[u] + 1;
        queue.push_back(inc.to);
      }
    }
  }
  std::sort(queue.begin(), queue.end());
  return queue;
}

WeightedGraph make_neighbor(const WeightedGraph& g, const NeighborEdit& edit) {
  if (!(std::abs(edit.delta) <= 1.0)) throw InputError("neighbor edit requires |delta| <= 1");
  auto id = g.find_edge(edit.u, edit.v);
  if (!id) {
    throw InputError("edge (" + std::to_string(edit.u) + "," + std::to_string(edit.v) +
                     ") does not exist");
  }
  std::vector<double> w(g.num_edges());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = g.edge(static_cast<EdgeId>(i)).w;
  w[*id] += edit.delta;
  if (w[*id] < 0.0) throw InputError("neighbor edit makes an edge weight negative");
  return g.with_weights(w);
}

std::vector<std::vector<Vertex>> connected_components(const WeightedGraph& g) {
  const std::size_t n = g.num_vertices();
  std::vector<char> seen(n, 0);
  std::vector<std::vector<Vertex>> out;
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
    std::sort(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  return out;
}

WeightedGraph read_graph(std::istream& in) {
  std::size_t n = 0, m = 0;
  double cap = 0.0;
  if (!(in >> n >> m >> cap)) throw InputError("graph file: expected header 'n m W'");
  std::vector<Edge> edges;
  edges.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    long long u = 0, v = 0;
    std::string ws;
    if (!(in >> u >> v >> ws)) {
      throw InputError("graph file: expected " + std::to_string(m) + " edge lines, got " +
                       std::to_string(i));
    }
    if (u < 0 || v < 0) throw InputError("graph file: negative vertex id");
    double w = 0.0;
    try {
      std::size_t used = 0;
      w = std::stod(ws, &used);
      if (used != ws.size()) throw std::invalid_argument(ws);
    } catch (const std::exception&) {
      throw InputError("graph file: bad weight '" + ws + "'");
    }
    edges.push_back({static_cast<Vertex>(u), static_cast<Vertex>(v), w});
  }
  std::string extra;
  if (in >> extra) throw InputError("graph file: trailing content after edge list");
  return WeightedGraph(n, std::move(edges), cap);
}

void write_graph(std::ostream& out, const WeightedGraph& g) {
  out << g.num_vertices() << ' ' << g.num_edges() << ' ' << format_distance(g.weight_cap())
      << '\n';
  for (const Edge& e : g.edges()) out << e.u << ' ' << e.v << ' ' << format_distance(e.w) << '\n';
}

std::string format_distance(double d) {
  if (std::isinf(d)) return d > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", d);
  return buf;
}

double parse_distance(const std::string& s) {
  if (s == "inf") return kInfinity;
  if (s == "-inf") return -kInfinity;
  std::size_t used = 0;
  double v = std::stod(s, &used);
  if (used != s.size()) throw InputError("bad number '" + s + "'");
  return v;
}

}  // namespace dpapsd
