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
#include <sstream>

#include "doctest.h"
#include "dpapsd/errors.hpp"
#include "dpapsd/graph.hpp"
#include "oracles.hpp"

using namespace dpapsd;

TEST_CASE("graph construction rejects malformed input") {
  CHECK_THROWS_AS(WeightedGraph(3, {{0, 3, 1.0}}), InputError);
  CHECK_THROWS_AS(WeightedGraph(3, {{1, 1, 1.0}}), InputError);
  CHECK_THROWS_AS(WeightedGraph(3, {{0, 1, 1.0}, {1, 0, 2.0}}), InputError);
  CHECK_THROWS_AS(WeightedGraph(3, {{0, 1, -0.5}}), InputError);
  CHECK_THROWS_AS(WeightedGraph(3, {{0, 1, NAN}}), InputError);
  CHECK_THROWS_AS(WeightedGraph(3, {{0, 1, 2.0}}, 1.0), InputError);
  WeightedGraph g(3, {{2, 0, 1.5}, {0, 1, 0.0}});
  CHECK(g.num_vertices() == 3);
  CHECK(g.num_edges() == 2);
  CHECK(g.degree(0) == 2);
  CHECK(g.find_edge(0, 2).has_value());
  CHECK_FALSE(g.find_edge(1, 2).has_value());
}

TEST_CASE("exact_apsd examples") {
  auto p = oracle::make_graph(4, oracle::path_edges(4));
  CHECK(exact_apsd(p).at(0, 3) == 3.0);
  WeightedGraph one(2, {{0, 1, 2.5}});
  CHECK(exact_apsd(one).at(0, 1) == 2.5);
  auto grid = oracle::make_graph(16, oracle::grid_edges(4, 4));
  CHECK(exact_apsd(grid).at(0, 15) == 6.0);
}

TEST_CASE("exact_apsd matches Floyd-Warshall on random graphs") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 2 + rng() % 40;
    auto edges = oracle::random_edges(rng, n, rng() % (n + 1), 5.0, 1 + rng() % 3);
    auto g = oracle::make_graph(n, edges);
    auto fw = oracle::floyd_warshall(n, edges);
    auto d = exact_apsd(g, 1 + trial % 3);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        if (std::isinf(fw[i][j])) {
          CHECK(std::isinf(d.at(i, j)));
        } else {
          CHECK(d.at(i, j) == doctest::Approx(fw[i][j]).epsilon(1e-12));
        }
      }
  }
}

TEST_CASE("exact_subgraph_apsd") {
  auto c4 = oracle::make_graph(4, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {3, 0, 1}});
  std::vector<Vertex> adj{0, 1};
  CHECK(exact_subgraph_apsd(c4, adj).distance(0, 1) == 1.0);
  std::vector<Vertex> far{0, 2};
  CHECK(std::isinf(exact_subgraph_apsd(c4, far).distance(0, 2)));
  std::vector<Vertex> bad{0, 9};
  CHECK_THROWS_AS(exact_subgraph_apsd(c4, bad), InputError);

  auto edges = oracle::grid_edges(3, 3);
  auto grid = oracle::make_graph(9, edges);
  std::vector<Vertex> row{3, 4, 5};
  auto d = exact_subgraph_apsd(grid, row);
  auto ref = oracle::induced_distances(9, edges, {3, 4, 5});
  for (Vertex x : row)
    for (Vertex y : row) CHECK(d.distance(x, y) == ref[x][y]);
  CHECK(d.distance(3, 5) == 2.0);
  CHECK(std::isinf(d.distance(3, 0)));
}

TEST_CASE("hop_ball") {
  auto star = oracle::make_graph(5, {{0, 1, 1}, {0, 2, 1}, {0, 3, 1}, {0, 4, 1}});
  CHECK(hop_ball(star, 2, 0) == std::vector<Vertex>{2});
  CHECK(hop_ball(star, 0, 1).size() == 5);
  auto p5 = oracle::make_graph(5, oracle::path_edges(5));
  CHECK(hop_ball(p5, 2, 1) == std::vector<Vertex>{1, 2, 3});
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 1 + rng() % 30;
    auto edges = oracle::random_edges(rng, n, rng() % n, 1.0, 1 + rng() % 2);
    auto g = oracle::make_graph(n, edges);
    auto hops = oracle::hop_matrix(n, edges);
    const Vertex src = static_cast<Vertex>(rng() % n);
    const std::size_t k = rng() % 4;
    std::vector<Vertex> expect;
    for (Vertex v = 0; v < n; ++v)
      if (hops[src][v] <= static_cast<double>(k)) expect.push_back(v);
    CHECK(hop_ball(g, src, k) == expect);
  }
}

TEST_CASE("make_neighbor") {
  WeightedGraph g(3, {{0, 1, 1.0}, {1, 2, 0.4}});
  CHECK(make_neighbor(g, {0, 1, 0.0}) == g);
  auto up = make_neighbor(g, {1, 0, 1.0});
  CHECK(up.edge(*up.find_edge(0, 1)).w == 2.0);
  CHECK_THROWS_AS(make_neighbor(g, {1, 2, -1.0}), InputError);
  CHECK_THROWS(make_neighbor(g, {0, 1, 1.5}));
  CHECK_THROWS(make_neighbor(g, {0, 2, 0.5}));
}

TEST_CASE("subgraphs and components") {
  auto g = oracle::make_graph(6, {{0, 1, 1}, {1, 2, 2}, {3, 4, 1}});
  auto comps = connected_components(g);
  REQUIRE(comps.size() == 3);
  CHECK(comps[0] == std::vector<Vertex>{0, 1, 2});
  CHECK(comps[1] == std::vector<Vertex>{3, 4});
  CHECK(comps[2] == std::vector<Vertex>{5});
  std::vector<Vertex> keep{1, 2, 4};
  auto sub = induced_subgraph(g, keep);
  CHECK(sub.graph.num_vertices() == 3);
  CHECK(sub.graph.num_edges() == 1);
  CHECK(sub.local_id(2) == 1u);
  CHECK_FALSE(sub.local_id(0).has_value());
  std::vector<Vertex> all{0, 1, 2};
  std::vector<EdgeId> only{1};
  auto es = edge_subgraph(g, all, only);
  CHECK(es.graph.num_edges() == 1);
  CHECK(es.edge_to_parent == std::vector<EdgeId>{1});
}

TEST_CASE("graph text round trip") {
  std::mt19937_64 rng(5);
  auto g = oracle::make_graph(20, oracle::random_edges(rng, 20, 10, 3.0), 3.0);
  std::stringstream ss;
  write_graph(ss, g);
  auto back = read_graph(ss);
  CHECK(back == g);
  std::istringstream bad("3 2 0\n0 1 1\n");
  CHECK_THROWS_AS(read_graph(bad), InputError);
  CHECK(format_distance(kInfinity) == "inf");
  CHECK(std::isinf(parse_distance("inf")));
  CHECK(parse_distance(format_distance(0.1)) == 0.1);
}
