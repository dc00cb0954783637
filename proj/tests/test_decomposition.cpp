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

#include <functional>
#include <map>
#include <numeric>
#include <sstream>

#include "doctest.h"
#include "dpapsd/decomposition.hpp"
#include "dpapsd/errors.hpp"
#include "oracles.hpp"

using namespace dpapsd;

namespace {

// Component sizes of V \ S in the graph (vertices, edges), brute force.
std::vector<std::size_t> component_sizes(const std::vector<Vertex>& vertices,
                                         const std::vector<oracle::RawEdge>& edges,
                                         const std::vector<Vertex>& sep) {
  std::map<Vertex, Vertex> parent;
  for (Vertex v : vertices)
    if (!std::binary_search(sep.begin(), sep.end(), v)) parent[v] = v;
  std::function<Vertex(Vertex)> find = [&](Vertex v) {
    return parent[v] == v ? v : parent[v] = find(parent[v]);
  };
  for (auto e : edges)
    if (parent.count(e.u) && parent.count(e.v)) parent[find(e.u)] = find(e.v);
  std::map<Vertex, std::size_t> size;
  for (auto& [v, p] : parent) ++size[find(v)];
  std::vector<std::size_t> out;
  for (auto& [r, s] : size) out.push_back(s);
  return out;
}

bool has(const std::vector<Vertex>& s, Vertex v) { return std::binary_search(s.begin(), s.end(), v); }

// Re-verifies a tree from scratch: edge rule, partition, no crossing
// edges, component and child bounds, leaf sizes, depth and multiplicity.
void verify_tree(std::size_t n, const std::vector<oracle::RawEdge>& all, const DecompTree& t) {
  const auto& prm = t.params();
  std::vector<std::vector<oracle::RawEdge>> node_edges(t.size());
  node_edges[0] = all;
  std::map<std::pair<Vertex, Vertex>, std::size_t> mult;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const auto& node = t.node(i);
    const auto& ve = node_edges[i];
    CHECK(node.edges.size() == ve.size());
    for (auto e : ve) ++mult[{e.u, e.v}];
    CHECK(node.depth() <= t.h());
    if (node.is_leaf()) {
      CHECK(node.vertices.size() <= prm.leaf_size);
      continue;
    }
    const auto& s = node.separator;
    CHECK(s.size() <= prm.p);
    const auto& a = t.node(node.children[0]).vertices;
    const auto& b = t.node(node.children[1]).vertices;
    std::vector<Vertex> uni;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(uni));
    CHECK(uni == node.vertices);
    for (Vertex v : a)
      if (has(b, v)) CHECK(has(s, v));
    for (Vertex v : s) CHECK((has(a, v) && has(b, v)));
    for (auto e : ve) {
      const bool a_only = (has(a, e.u) && !has(s, e.u)) || (has(a, e.v) && !has(s, e.v));
      const bool b_only = (has(b, e.u) && !has(s, e.u)) || (has(b, e.v) && !has(s, e.v));
      CHECK_FALSE((a_only && b_only));
    }
    const double nv = static_cast<double>(node.vertices.size());
    for (auto c : component_sizes(node.vertices, ve, s)) CHECK(c <= prm.q * nv + 1e-9);
    CHECK(std::max(a.size(), b.size()) <= prm.q_prime * nv + 1e-9);
    for (int side = 0; side < 2; ++side) {
      const auto& cv = side == 0 ? a : b;
      auto& out = node_edges[node.children[side]];
      for (auto e : ve)
        if (has(cv, e.u) && has(cv, e.v) && !(has(s, e.u) && has(s, e.v))) out.push_back(e);
    }
  }
  for (auto& [e, m] : mult) CHECK(m <= t.h() + 1);
  (void)n;
}

}  // namespace

TEST_CASE("strategy names round trip") {
  for (auto s : {SeparatorStrategy::kPathMidpoint, SeparatorStrategy::kTreeCentroid,
                 SeparatorStrategy::kGridAxis, SeparatorStrategy::kBfsLevel,
                 SeparatorStrategy::kSuppliedTreeDecomposition}) {
    CHECK(parse_strategy(strategy_name(s)) == s);
  }
  CHECK_THROWS_AS(parse_strategy("nope"), ParameterError);
}

TEST_CASE("find_separator examples") {
  SeparationParams prm;
  SeparatorConfig tc{SeparatorStrategy::kTreeCentroid, {}, nullptr};
  auto star = oracle::make_graph(7, {{0, 1, 1}, {0, 2, 1}, {0, 3, 1}, {0, 4, 1}, {0, 5, 1}, {0, 6, 1}});
  std::vector<Vertex> all7{0, 1, 2, 3, 4, 5, 6};
  auto r = find_separator(star, all7, tc, prm);
  CHECK(r.separator == std::vector<Vertex>{0});
  CHECK(r.side_a.size() + r.side_b.size() == 6);

  auto p9e = oracle::path_edges(9);
  auto p9 = oracle::make_graph(9, p9e);
  std::vector<Vertex> all9{0, 1, 2, 3, 4, 5, 6, 7, 8};
  // Brute force: the most balanced single vertex.
  Vertex best = 0;
  std::size_t best_part = 99;
  for (Vertex v = 0; v < 9; ++v) {
    std::size_t worst = 0;
    for (auto c : component_sizes(all9, p9e, {v})) worst = std::max(worst, c);
    if (worst < best_part) best_part = worst, best = v;
  }
  r = find_separator(p9, all9, tc, prm);
  CHECK(r.separator == std::vector<Vertex>{best});
  CHECK(r.separator == std::vector<Vertex>{4});
  CHECK(r.side_a.size() == 4);
  CHECK(r.side_b.size() == 4);
  SeparatorConfig pm{SeparatorStrategy::kPathMidpoint, {}, nullptr};
  CHECK(find_separator(p9, all9, pm, prm).separator == std::vector<Vertex>{4});

  auto grid = oracle::make_graph(16, oracle::grid_edges(4, 4));
  std::vector<Vertex> all16(16);
  std::iota(all16.begin(), all16.end(), Vertex{0});
  SeparatorConfig ga{SeparatorStrategy::kGridAxis, GridShape{4, 4}, nullptr};
  r = find_separator(grid, all16, ga, prm);
  REQUIRE(r.separator.size() == 4);
  const std::size_t col = r.separator[0] % 4;
  for (Vertex v : r.separator) CHECK(v % 4 == col);
  CHECK((col == 1 || col == 2));
  CHECK(std::min(r.side_a.size(), r.side_b.size()) == 4);
  CHECK(std::max(r.side_a.size(), r.side_b.size()) == 8);
  CHECK(8 <= 2.0 / 3.0 * 16);
}

TEST_CASE("find_separator errors") {
  SeparationParams prm;
  auto grid = oracle::make_graph(16, oracle::grid_edges(4, 4));
  std::vector<Vertex> all16(16);
  std::iota(all16.begin(), all16.end(), Vertex{0});
  SeparatorConfig tc{SeparatorStrategy::kTreeCentroid, {}, nullptr};
  CHECK_THROWS_AS(find_separator(grid, all16, tc, prm), StrategyError);
  SeparatorConfig pm{SeparatorStrategy::kPathMidpoint, {}, nullptr};
  CHECK_THROWS_AS(find_separator(grid, all16, pm, prm), StrategyError);
  SeparatorConfig ga{SeparatorStrategy::kGridAxis, std::nullopt, nullptr};
  CHECK_THROWS_AS(find_separator(grid, all16, ga, prm), StrategyError);
  SeparationParams capped = prm;
  capped.p = 2;
  SeparatorConfig ga4{SeparatorStrategy::kGridAxis, GridShape{4, 4}, nullptr};
  CHECK_THROWS_AS(find_separator(grid, all16, ga4, capped), CapExceededError);
  // A clique has no balanced separator at all.
  std::vector<Edge> k5;
  for (Vertex i = 0; i < 5; ++i)
    for (Vertex j = i + 1; j < 5; ++j) k5.push_back({i, j, 1.0});
  WeightedGraph clique(5, k5);
  std::vector<Vertex> all5{0, 1, 2, 3, 4};
  SeparatorConfig bl{SeparatorStrategy::kBfsLevel, {}, nullptr};
  CHECK_THROWS_AS(find_separator(clique, all5, bl, prm), NoSeparatorError);
  CHECK_FALSE(exhaustive_separator(clique, prm).has_value());
}

TEST_CASE("split_by agrees with brute force on small random graphs") {
  std::mt19937_64 rng(21);
  SeparationParams prm;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 3 + rng() % 10;
    auto edges = oracle::random_edges(rng, n, rng() % 4, 1.0, 1 + rng() % 2);
    auto g = oracle::make_graph(n, edges);
    std::vector<Vertex> all(n), sep;
    std::iota(all.begin(), all.end(), Vertex{0});
    for (Vertex v = 0; v < n; ++v)
      if (rng() % 4 == 0) sep.push_back(v);
    auto s = split_by(g, sep, prm);
    std::size_t worst = 0;
    for (auto c : component_sizes(all, edges, sep)) worst = std::max(worst, c);
    CHECK(s.components_ok == (worst <= prm.q * n + 1e-9));
    CHECK(s.parts.side_a.size() + s.parts.side_b.size() + sep.size() == n);
    for (auto e : edges) {
      const bool ua = has(s.parts.side_a, e.u), va = has(s.parts.side_a, e.v);
      const bool ub = has(s.parts.side_b, e.u), vb = has(s.parts.side_b, e.v);
      CHECK_FALSE(((ua && vb) || (ub && va)));
    }
  }
}

TEST_CASE("exhaustive separator is optimal") {
  std::mt19937_64 rng(4);
  SeparationParams prm;
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 4 + rng() % 6;
    auto edges = oracle::random_edges(rng, n, rng() % 5, 1.0);
    auto g = oracle::make_graph(n, edges);
    std::vector<Vertex> all(n);
    std::iota(all.begin(), all.end(), Vertex{0});
    std::size_t best = SIZE_MAX;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      std::vector<Vertex> sep;
      for (Vertex v = 0; v < n; ++v)
        if (mask >> v & 1) sep.push_back(v);
      auto s = split_by(g, sep, prm);
      if (s.balanced) best = std::min(best, s.max_part);
    }
    auto found = exhaustive_separator(g, prm);
    CHECK(found.has_value() == (best != SIZE_MAX));
    if (found) CHECK(split_by(g, found->separator, prm).max_part == best);
  }
}

TEST_CASE("build_tree examples") {
  SeparationParams prm;
  auto p4 = oracle::make_graph(4, oracle::path_edges(4));
  auto t4 = build_tree(p4, prm, {SeparatorStrategy::kTreeCentroid, {}, nullptr});
  CHECK(t4.size() == 1);
  CHECK(t4.root().is_leaf());
  CHECK(t4.root().separator.empty());

  SeparationParams c2 = prm;
  c2.leaf_size = 2;
  auto p8e = oracle::path_edges(8);
  auto p8 = oracle::make_graph(8, p8e);
  auto t8 = build_tree(p8, c2, {SeparatorStrategy::kTreeCentroid, {}, nullptr});
  CHECK(t8.h() == depth_bound(8, 2, 0.75));
  CHECK(t8.max_depth() <= t8.h());
  CHECK(t8.max_leaf_size() <= 2);
  verify_tree(8, p8e, t8);
  CHECK(validate_tree(p8, t8).ok());

  auto ge = oracle::grid_edges(8, 8);
  auto grid = oracle::make_graph(64, ge);
  auto tg = build_tree(grid, prm, {SeparatorStrategy::kGridAxis, GridShape{8, 8}, nullptr});
  verify_tree(64, ge, tg);
  auto rep = validate_tree(grid, tg);
  CHECK_MESSAGE(rep.ok(), rep.to_string());
  CHECK(rep.max_edge_multiplicity <= tg.h());
}

TEST_CASE("depth_bound") {
  CHECK(depth_bound(4, 4, 0.75) == 1);
  CHECK(depth_bound(8, 2, 0.75) == 5);  // (3/4)^5 * 4 < 1 <= (3/4)^4 * 4
  CHECK(depth_bound(64, 4, 0.75) == 10);
}

TEST_CASE("an edge reaching a leaf at depth h lies in h+1 subgraphs") {
  // P5, c = 4: h = 1, the root must split and every edge survives into a leaf.
  auto g = oracle::make_graph(5, oracle::path_edges(5));
  auto t = build_tree(g, {}, {SeparatorStrategy::kPathMidpoint, {}, nullptr});
  REQUIRE(t.h() == 1);
  auto rep = validate_tree(g, t);
  CHECK(rep.ok());
  CHECK(rep.max_edge_multiplicity == 2);
  CHECK(rep.notes.size() == 1);
}

TEST_CASE("build_tree over strategies and families passes the independent walk") {
  std::mt19937_64 rng(8);
  SeparationParams prm;
  for (int trial = 0; trial < 12; ++trial) {
    const std::size_t n = 10 + rng() % 80;
    auto te = oracle::random_edges(rng, n, 0, 2.0);
    auto tree = oracle::make_graph(n, te);
    for (auto s : {SeparatorStrategy::kTreeCentroid, SeparatorStrategy::kBfsLevel}) {
      auto t = build_tree(tree, prm, {s, {}, nullptr});
      verify_tree(n, te, t);
      CHECK(validate_tree(tree, t).ok());
    }
  }
  auto pe = oracle::path_edges(37);
  auto path = oracle::make_graph(37, pe);
  auto tp = build_tree(path, prm, {SeparatorStrategy::kPathMidpoint, {}, nullptr});
  verify_tree(37, pe, tp);
  auto ge = oracle::grid_edges(5, 7);
  auto grid = oracle::make_graph(35, ge);
  auto tb = build_tree(grid, prm, {SeparatorStrategy::kBfsLevel, {}, nullptr});
  auto rep = validate_tree(grid, tb);
  CHECK_MESSAGE(rep.ok(), rep.to_string());
}

TEST_CASE("supplied tree decomposition strategy") {
  // Path 0..5 with bags {i, i+1}.
  std::istringstream td_text("5\n0 2 0 1\n1 2 1 2\n2 2 2 3\n3 2 3 4\n4 2 4 5\n0 1\n1 2\n2 3\n3 4\n");
  auto td = std::make_shared<TreeDecomposition>(read_tree_decomposition(td_text));
  CHECK(td->bags.size() == 5);
  auto pe = oracle::path_edges(6);
  auto g = oracle::make_graph(6, pe);
  SeparationParams prm;
  prm.leaf_size = 2;
  auto t = build_tree(g, prm, {SeparatorStrategy::kSuppliedTreeDecomposition, {}, td});
  auto rep = validate_tree(g, t);
  CHECK_MESSAGE(rep.ok(), rep.to_string());
  CHECK_FALSE(t.root().is_leaf());
}

TEST_CASE("validate_tree detects injected faults") {
  SeparationParams c2;
  c2.leaf_size = 2;
  auto p8 = oracle::make_graph(8, oracle::path_edges(8));
  auto t = build_tree(p8, c2, {SeparatorStrategy::kTreeCentroid, {}, nullptr});
  REQUIRE(validate_tree(p8, t).ok());

  // Drop the root separator and pull it out of one child: the edge across
  // the old separator now joins the sides.
  auto nodes = t.nodes();
  const Vertex s = nodes[0].separator.at(0);
  nodes[0].separator.clear();
  auto& c1 = nodes[nodes[0].children[1]].vertices;
  c1.erase(std::find(c1.begin(), c1.end(), s));
  DecompTree crossing(8, c2, nodes);
  auto rep = validate_tree(p8, crossing);
  CHECK_FALSE(rep.ok());
  bool at_root = false;
  for (const auto& v : rep.violations) at_root = at_root || v.rfind("b=(root)", 0) == 0;
  CHECK(at_root);

  // A leaf of size c + 1 built from a path (which has valid separators).
  SeparationParams c3 = c2;
  auto p3 = oracle::make_graph(3, oracle::path_edges(3));
  DecompNode leaf;
  leaf.vertices = {0, 1, 2};
  leaf.edges = {0, 1};
  DecompTree big(3, c3, {leaf});
  rep = validate_tree(p3, big);
  CHECK_FALSE(rep.ok());
  CHECK(rep.to_string().find("leaf has 3 > c=2") != std::string::npos);
}

TEST_CASE("oversized leaves are certified when no separator exists") {
  std::vector<Edge> k6;
  for (Vertex i = 0; i < 6; ++i)
    for (Vertex j = i + 1; j < 6; ++j) k6.push_back({i, j, 1.0});
  WeightedGraph clique(6, k6);
  SeparationParams prm;
  auto t = build_tree(clique, prm, {SeparatorStrategy::kBfsLevel, {}, nullptr});
  CHECK(t.size() == 1);
  auto rep = validate_tree(clique, t);
  CHECK(rep.ok());
  CHECK(rep.notes.size() == 1);
}

TEST_CASE("tree JSON round trip") {
  auto grid = oracle::make_graph(36, oracle::grid_edges(6, 6));
  SeparationParams prm;
  auto t = build_tree(grid, prm, {SeparatorStrategy::kGridAxis, GridShape{6, 6}, nullptr});
  std::stringstream ss;
  write_tree_json(ss, t);
  auto back = read_tree_json(ss, grid);
  CHECK(back == t);
  std::istringstream bad("{\"n\": 3}");
  CHECK_THROWS_AS(read_tree_json(bad, grid), InputError);
}
