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

#include <cmath>

#include "doctest.h"
#include "dpapsd/apsd.hpp"
#include "dpapsd/errors.hpp"
#include "dpapsd/shortcuts.hpp"
#include "oracles.hpp"

using namespace dpapsd;

namespace {

bool same(double a, double b, double tol = 1e-9) {
  if (std::isinf(a) || std::isinf(b)) return a == b;
  return std::abs(a - b) <= tol;
}

oracle::Matrix node_distances(const WeightedGraph& g, const DecompNode& node) {
  std::vector<oracle::RawEdge> edges;
  for (EdgeId id : node.edges) edges.push_back({g.edge(id).u, g.edge(id).v, g.edge(id).w});
  return oracle::floyd_warshall(g.num_vertices(), edges);
}

struct Case {
  std::string name;
  WeightedGraph g;
  SeparatorConfig cfg;
};

std::vector<Case> zoo() {
  std::mt19937_64 rng(31);
  std::vector<Case> out;
  auto weighted = [&](std::vector<oracle::RawEdge> e, double w) {
    std::uniform_real_distribution<double> wd(0.0, w);
    for (auto& x : e) x.w = wd(rng);
    return e;
  };
  out.push_back({"path", oracle::make_graph(23, weighted(oracle::path_edges(23), 2.0)),
                 {SeparatorStrategy::kPathMidpoint, {}, nullptr}});
  out.push_back({"tree", oracle::make_graph(40, oracle::random_edges(rng, 40, 0, 3.0)),
                 {SeparatorStrategy::kTreeCentroid, {}, nullptr}});
  out.push_back({"grid", oracle::make_graph(49, weighted(oracle::grid_edges(7, 7), 1.0)),
                 {SeparatorStrategy::kGridAxis, GridShape{7, 7}, nullptr}});
  out.push_back({"grid-bfs", oracle::make_graph(30, weighted(oracle::grid_edges(5, 6), 1.0)),
                 {SeparatorStrategy::kBfsLevel, {}, nullptr}});
  out.push_back({"sparse", oracle::make_graph(35, oracle::random_edges(rng, 35, 6, 2.0)),
                 {SeparatorStrategy::kBfsLevel, {}, nullptr}});
  out.push_back({"forest", oracle::make_graph(30, oracle::random_edges(rng, 30, 2, 2.0, 3)),
                 {SeparatorStrategy::kBfsLevel, {}, nullptr}});
  out.push_back({"zero-weights", oracle::make_graph(25, oracle::grid_edges(5, 5, 0.0)),
                 {SeparatorStrategy::kGridAxis, GridShape{5, 5}, nullptr}});
  return out;
}

}  // namespace

TEST_CASE("zero-noise apsd_all equals Floyd-Warshall") {
  for (const auto& c : zoo()) {
    CAPTURE(c.name);
    auto t = build_tree(c.g, {}, c.cfg);
    REQUIRE(validate_tree(c.g, t).ok());
    auto table = build_shortcuts_general(c.g, t, {0.5, 1e-6, NoiseMode::kGaussian}, 1, {true});
    QueryContext ctx(t, table);
    auto est = ctx.apsd_all();
    auto ref = oracle::floyd_warshall(c.g.num_vertices(), oracle::raw_edges(c.g));
    for (std::size_t i = 0; i < ref.size(); ++i)
      for (std::size_t j = 0; j < ref.size(); ++j) CHECK(same(est.at(i, j), ref[i][j]));
  }
}

TEST_CASE("zero-noise recursive_apsd equals d_b at every node") {
  for (const auto& c : zoo()) {
    CAPTURE(c.name);
    auto t = build_tree(c.g, {}, c.cfg);
    auto table = build_shortcuts_general(c.g, t, {0.5, 1e-6, NoiseMode::kGaussian}, 1, {true});
    QueryContext ctx(t, table);
    for (std::size_t i = 0; i < t.size(); ++i) {
      const auto& node = t.node(i);
      auto d = node_distances(c.g, node);
      for (Vertex s : node.vertices)
        for (Vertex u : node.vertices) CHECK(same(ctx.recursive_apsd(i, s, u, 0), d[s][u]));
    }
  }
}

TEST_CASE("cross-side pairs equal the brute-force three-segment minimum") {
  auto c = zoo()[2];
  auto t = build_tree(c.g, {}, c.cfg);
  auto table = build_shortcuts_general(c.g, t, {0.5, 1e-6, NoiseMode::kGaussian}, 1, {true});
  QueryContext ctx(t, table);
  const auto& root = t.root();
  const auto& a = t.node(root.children[0]);
  const auto& b = t.node(root.children[1]);
  auto da = node_distances(c.g, a), db = node_distances(c.g, b), dr = node_distances(c.g, root);
  const auto& s_b = root.separator;
  int checked = 0;
  for (Vertex s : a.vertices) {
    if (std::binary_search(s_b.begin(), s_b.end(), s)) continue;
    for (Vertex u : b.vertices) {
      if (std::binary_search(s_b.begin(), s_b.end(), u)) continue;
      double best = oracle::kInf;
      for (Vertex x : s_b)
        for (Vertex y : s_b) best = std::min(best, da[s][x] + dr[x][y] + db[y][u]);
      CHECK(same(ctx.recursive_apsd("", s, u, 0), best));
      ++checked;
    }
  }
  CHECK(checked > 100);
}

TEST_CASE("shortcut hits return the stored noisy value") {
  auto c = zoo()[2];
  auto t = build_tree(c.g, {}, c.cfg);
  auto table = build_shortcuts_general(c.g, t, {0.5, 1e-6, NoiseMode::kGaussian}, 5);
  QueryContext ctx(t, table);
  const auto& s = t.root().separator;
  REQUIRE(s.size() >= 2);
  CHECK(ctx.recursive_apsd("", s[0], s[1], 0) == *table.lookup("", s[0], s[1]));
  // Leaf pairs.
  for (std::size_t i = 0; i < t.size(); ++i) {
    const auto& node = t.node(i);
    if (!node.is_leaf() || node.vertices.size() < 2) continue;
    const Vertex x = node.vertices[0], y = node.vertices[1];
    CHECK(ctx.recursive_apsd(i, x, y, 0) == *table.lookup(i, x, y));
    break;
  }
}

TEST_CASE("single-leaf tree returns the leaf table") {
  auto p4 = oracle::make_graph(4, oracle::path_edges(4));
  auto t = build_tree(p4, {}, {SeparatorStrategy::kPathMidpoint, {}, nullptr});
  auto table = build_shortcuts_general(p4, t, {0.5, 1e-6, NoiseMode::kGaussian}, 2);
  QueryContext ctx(t, table);
  auto est = ctx.apsd_all();
  for (Vertex x = 0; x < 4; ++x) {
    CHECK(est.at(x, x) == 0.0);
    for (Vertex y = x + 1; y < 4; ++y) {
      CHECK(est.at(x, y) == *table.lookup("", x, y));
      CHECK(est.at(y, x) == est.at(x, y));
    }
  }
}

TEST_CASE("disconnected pairs are infinite") {
  auto g = oracle::make_graph(12, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {3, 4, 1}, {6, 7, 1},
                                   {7, 8, 1}, {8, 9, 1}, {9, 10, 1}, {10, 11, 1}});
  auto t = build_tree(g, {}, {SeparatorStrategy::kBfsLevel, {}, nullptr});
  auto table = build_shortcuts_general(g, t, {0.5, 1e-6, NoiseMode::kGaussian}, 3);
  QueryContext ctx(t, table);
  auto est = ctx.apsd_all();
  CHECK(std::isinf(est.at(0, 7)));
  CHECK(std::isinf(est.at(5, 0)));
  CHECK(std::isfinite(est.at(0, 4)));
}

TEST_CASE("query_pair agrees with apsd_all and is memoized") {
  auto c = zoo()[3];
  auto t = build_tree(c.g, {}, c.cfg);
  auto table = build_shortcuts_general(c.g, t, {0.5, 1e-6, NoiseMode::kGaussian}, 8);
  QueryContext q(t, table);
  CHECK(q.query_pair(4, 4) == 0.0);
  const double first = q.query_pair(0, 29);
  const auto evals = q.evaluations();
  CHECK(q.query_pair(0, 29) == first);
  CHECK(q.query_pair(29, 0) == first);
  CHECK(q.evaluations() == evals);
  CHECK_THROWS(q.query_pair(0, 30));

  QueryContext all(t, table);
  auto est = all.apsd_all();
  CHECK(est.at(0, 29) == first);
  QueryContext lean(t, table, {.keep_intermediate = false});
  auto est2 = lean.apsd_all();
  QueryContext fresh(t, table);
  for (Vertex s = 0; s < 30; ++s)
    for (Vertex u = 0; u < 30; ++u) {
      CHECK(est.at(s, u) == est2.at(s, u));
      CHECK(est.at(s, u) == est.at(u, s));
      CHECK(fresh.query_pair(s, u) == est.at(s, u));
    }
}

TEST_CASE("k > 0 precondition violation raises FailError") {
  auto c = zoo()[2];
  auto t = build_tree(c.g, {}, c.cfg);
  auto table = build_shortcuts_general(c.g, t, {0.5, 1e-6, NoiseMode::kGaussian}, 1, {true});
  QueryContext ctx(t, table);
  const auto& child = t.node(t.root().children[0]);
  const auto& ps = t.root().separator;
  std::vector<Vertex> outside;
  for (Vertex v : child.vertices)
    if (!std::binary_search(ps.begin(), ps.end(), v)) outside.push_back(v);
  REQUIRE(outside.size() >= 2);
  CHECK_THROWS_AS(ctx.recursive_apsd("0", outside[0], outside[1], 1), FailError);
  // With an endpoint in the parent separator the call is valid.
  auto d = node_distances(c.g, child);
  CHECK(same(ctx.recursive_apsd("0", outside[0], ps[0], 1), d[outside[0]][ps[0]]));
  CHECK(std::isinf(ctx.recursive_apsd("0", outside[0], 10000, 0)));
}

TEST_CASE("zero-noise covering variant stays within 2hkW") {
  std::mt19937_64 rng(2);
  auto edges = oracle::grid_edges(8, 8);
  std::uniform_real_distribution<double> wd(0.0, 1.0);
  for (auto& e : edges) e.w = wd(rng);
  auto g = oracle::make_graph(64, edges, 1.0);
  auto t = build_tree(g, {}, {SeparatorStrategy::kGridAxis, GridShape{8, 8}, nullptr});
  auto ref = oracle::floyd_warshall(64, edges);
  for (std::size_t k : {1, 2, 3}) {
    auto table = build_shortcuts_covering(g, t, {0.5, 1e-6, NoiseMode::kGaussian}, k, 1, {true});
    QueryContext ctx(t, table);
    auto est = ctx.apsd_all();
    const double bound = 2.0 * t.h() * k * 1.0;
    for (std::size_t i = 0; i < 64; ++i)
      for (std::size_t j = 0; j < 64; ++j) {
        CHECK(est.at(i, j) >= ref[i][j] - 1e-9);
        CHECK(est.at(i, j) <= ref[i][j] + bound);
      }
  }
}
