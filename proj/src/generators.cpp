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
#include <cmath>
#include <numeric>
#include <random>

#include "dpapsd/errors.hpp"
#include "dpapsd/harness.hpp"

namespace dpapsd {

namespace {

constexpr double kDeletedFraction = 0.2;

std::vector<Edge> grid_edges(std::size_t rows, std::size_t cols) {
  std::vector<Edge> edges;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const auto v = static_cast<Vertex>(r * cols + c);
      if (c + 1 < cols) edges.push_back({v, v + 1, 0.0});
      if (r + 1 < rows) edges.push_back({v, static_cast<Vertex>(v + cols), 0.0});
    }
  }
  return edges;
}

void resolve_grid_shape(GraphSpec& spec) {
  if (spec.rows == 0 && spec.cols == 0) {
    const auto side = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(spec.n))));
    if (side * side != spec.n) {
      throw ParameterError("grid family needs rows and cols unless n is a perfect square");
    }
    spec.rows = spec.cols = side;
  }
  if (spec.rows == 0 || spec.cols == 0) throw ParameterError("grid needs both rows and cols");
  if (spec.n != 0 && spec.rows * spec.cols != spec.n) {
    throw ParameterError("inconsistent grid shape: rows * cols != n");
  }
  spec.n = spec.rows * spec.cols;
}

}  // namespace

std::string_view family_name(GraphFamily f) {
  switch (f) {
    case GraphFamily::kPath: return "path";
    case GraphFamily::kRandomTree: return "random-tree";
    case GraphFamily::kGrid: return "grid";
    case GraphFamily::kSubgridPlanar: return "subgrid-planar";
  }
  return "unknown";
}

GraphFamily parse_family(std::string_view name) {
  for (auto f : {GraphFamily::kPath, GraphFamily::kRandomTree, GraphFamily::kGrid,
                 GraphFamily::kSubgridPlanar}) {
    if (family_name(f) == name) return f;
  }
  throw ParameterError("unknown graph family '" + std::string(name) + "'");
}

GeneratedGraph generate_graph(const GraphSpec& input, std::uint64_t seed) {
  GraphSpec spec = input;
  const bool grid_like = spec.family == GraphFamily::kGrid || spec.family == GraphFamily::kSubgridPlanar;
  if (grid_like) resolve_grid_shape(spec);
  if (spec.n < 1) throw ParameterError("graph needs at least one vertex");
  if (!spec.unit_weights && !(spec.weight_cap > 0.0)) {
    throw ParameterError("uniform weights need a positive cap W");
  }
  std::mt19937_64 topo(stream_seed(seed, "topology", ReleaseKind::kEdge));
  std::mt19937_64 weights(stream_seed(seed, "weights", ReleaseKind::kEdge));

  GeneratedGraph out;
  std::vector<Edge> edges;
  std::size_t n = spec.n;
  switch (spec.family) {
    case GraphFamily::kPath:
      for (Vertex v = 0; v + 1 < n; ++v) edges.push_back({v, v + 1, 0.0});
      out.default_strategy = SeparatorStrategy::kPathMidpoint;
      break;
    case GraphFamily::kRandomTree:
      for (Vertex v = 1; v < n; ++v) {
        std::uniform_int_distribution<Vertex> pick(0, v - 1);
        edges.push_back({pick(topo), v, 0.0});
      }
      out.default_strategy = SeparatorStrategy::kTreeCentroid;
      break;
    case GraphFamily::kGrid:
      edges = grid_edges(spec.rows, spec.cols);
      out.grid = GridShape{spec.rows, spec.cols};
      out.default_strategy = SeparatorStrategy::kGridAxis;
      break;
    case GraphFamily::kSubgridPlanar: {
      std::vector<Vertex> order(n);
      std::iota(order.begin(), order.end(), Vertex{0});
      std::shuffle(order.begin(), order.end(), topo);
      const auto removed = static_cast<std::size_t>(std::llround(kDeletedFraction * n));
      std::vector<char> alive(n, 1);
      for (std::size_t i = 0; i < removed && i + 1 < n; ++i) alive[order[i]] = 0;
      std::vector<Edge> kept;
      for (const Edge& e : grid_edges(spec.rows, spec.cols)) {
        if (alive[e.u] && alive[e.v]) kept.push_back(e);
      }
      WeightedGraph full(n, kept);
      std::vector<Vertex> best;
      for (auto& comp : connected_components(full)) {
        if (alive[comp.front()] && comp.size() > best.size()) best = std::move(comp);
      }
      Subgraph sub = induced_subgraph(full, best);
      edges = sub.graph.edges();
      n = best.size();
      out.default_strategy = SeparatorStrategy::kBfsLevel;
      break;
    }
  }
  std::uniform_real_distribution<double> draw(0.0, spec.unit_weights ? 1.0 : spec.weight_cap);
  for (Edge& e : edges) e.w = spec.unit_weights ? 1.0 : std::min(draw(weights), spec.weight_cap);
  out.graph = WeightedGraph(n, std::move(edges), spec.unit_weights ? 1.0 : spec.weight_cap);
  return out;
}

std::size_t default_covering_k(GraphFamily family, std::size_t n, double weight_cap,
                               double epsilon) {
  if (!(weight_cap > 0.0) || !(epsilon > 0.0)) throw ParameterError("k rule needs W > 0 and eps > 0");
  const double nd = static_cast<double>(n);
  double k = family == GraphFamily::kGrid
                 ? std::pow(nd, 0.25) / std::sqrt(weight_cap * epsilon)
                 : std::cbrt(nd) / std::pow(epsilon * weight_cap, 2.0 / 3.0);
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(k)));
}

}  // namespace dpapsd
