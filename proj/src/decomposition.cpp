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

#include "dpapsd/decomposition.hpp"

#include <algorithm>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "dpapsd/errors.hpp"
#include "json.hpp"

namespace dpapsd {

namespace {

constexpr double kSlack = 1e-9;

std::string show(const std::string& label) { return label.empty() ? "b=(root)" : "b=" + label; }

bool contains(std::span<const Vertex> sorted, Vertex v) {
  return std::binary_search(sorted.begin(), sorted.end(), v);
}

std::vector<Vertex> merged(std::span<const Vertex> a, std::span<const Vertex> b) {
  std::vector<Vertex> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace

std::size_t depth_bound(std::size_t n, std::size_t c, double q_prime) {
  if (c == 0) throw ParameterError("leaf size c must be at least 1");
  if (!(q_prime > 0.0 && q_prime < 1.0)) throw ParameterError("q' must lie in (0,1)");
  std::size_t h = 0;
  double x = static_cast<double>(n) / static_cast<double>(c);
  while (x > 1.0 + 1e-12) {
    x *= q_prime;
    ++h;
  }
  return std::max<std::size_t>(h, 1);
}

DecompTree::DecompTree(std::size_t n, SeparationParams params, std::vector<DecompNode> nodes)
    : n_(n), params_(params), h_(depth_bound(n, params.leaf_size, params.q_prime)),
      nodes_(std::move(nodes)) {
  if (nodes_.empty()) throw InputError("decomposition tree has no nodes");
}

std::size_t DecompTree::max_depth() const {
  std::size_t d = 0;
  for (const auto& node : nodes_) d = std::max(d, node.depth());
  return d;
}

std::size_t DecompTree::max_separator_size() const {
  std::size_t p = 0;
  for (const auto& node : nodes_) p = std::max(p, node.separator.size());
  return p;
}

std::size_t DecompTree::max_leaf_size() const {
  std::size_t c = 0;
  for (const auto& node : nodes_) {
    if (node.is_leaf()) c = std::max(c, node.vertices.size());
  }
  return c;
}

std::optional<std::size_t> DecompTree::find(std::string_view label) const {
  std::size_t i = 0;
  for (char bit : label) {
    if ((bit != '0' && bit != '1') || nodes_[i].is_leaf()) return std::nullopt;
    i = static_cast<std::size_t>(nodes_[i].children[bit - '0']);
  }
  return i;
}

bool operator==(const DecompTree& a, const DecompTree& b) {
  if (a.n_ != b.n_ || a.nodes_.size() != b.nodes_.size()) return false;
  for (std::size_t i = 0; i < a.nodes_.size(); ++i) {
    const auto& x = a.nodes_[i];
    const auto& y = b.nodes_[i];
    if (x.label != y.label || x.vertices != y.vertices || x.separator != y.separator ||
        x.edges != y.edges || x.children != y.children || x.parent != y.parent) {
      return false;
    }
  }
  return true;
}

std::vector<EdgeId> child_edges(const WeightedGraph& g, std::span<const EdgeId> parent_edges,
                                std::span<const Vertex> child_vertices,
                                std::span<const Vertex> parent_separator) {
  std::vector<EdgeId> out;
  for (EdgeId id : parent_edges) {
    const Edge& e = g.edge(id);
    if (!contains(child_vertices, e.u) || !contains(child_vertices, e.v)) continue;
    if (contains(parent_separator, e.u) && contains(parent_separator, e.v)) continue;
    out.push_back(id);
  }
  return out;
}

DecompTree build_tree(const WeightedGraph& g, const SeparationParams& params,
                      const SeparatorConfig& config) {
  if (params.leaf_size == 0) throw ParameterError("leaf size c must be at least 1");
  if (!(params.q > 0.0 && params.q <= params.q_prime && params.q_prime < 1.0)) {
    throw ParameterError("separation parameters need 0 < q <= q' < 1");
  }
  std::vector<DecompNode> nodes(1);
  nodes[0].vertices.resize(g.num_vertices());
  std::iota(nodes[0].vertices.begin(), nodes[0].vertices.end(), Vertex{0});
  nodes[0].edges.resize(g.num_edges());
  std::iota(nodes[0].edges.begin(), nodes[0].edges.end(), EdgeId{0});

  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].vertices.size() <= params.leaf_size) continue;
    Subgraph sub = edge_subgraph(g, nodes[i].vertices, nodes[i].edges);
    std::optional<SeparatorResult> found;
    try {
      found = separate_graph(sub.graph, sub.to_parent, config, params);
    } catch (const NoSeparatorError&) {
      if (sub.graph.num_vertices() <= kExhaustiveLimit) {
        found = exhaustive_separator(sub.graph, params);
      }
    }
    if (!found) continue;  // oversized leaf, reported by validate_tree
    for (auto* part : {&found->separator, &found->side_a, &found->side_b}) {
      for (Vertex& v : *part) v = sub.to_parent[v];
    }
    nodes[i].separator = found->separator;
    for (int a = 0; a < 2; ++a) {
      DecompNode child;
      child.label = nodes[i].label + static_cast<char>('0' + a);
      child.parent = static_cast<int>(i);
      child.vertices = merged(a == 0 ? found->side_a : found->side_b, found->separator);
      child.edges = child_edges(g, nodes[i].edges, child.vertices, found->separator);
      nodes[i].children[a] = static_cast<int>(nodes.size());
      nodes.push_back(std::move(child));
    }
  }
  return DecompTree(g.num_vertices(), params, std::move(nodes));
}

std::string ValidationReport::to_string() const {
  std::ostringstream os;
  os << (ok() ? "OK" : "INVALID") << ": h=" << h << " max_depth=" << max_depth
     << " max_edge_multiplicity=" << max_edge_multiplicity << " violations=" << violations.size()
     << " notes=" << notes.size() << '\n';
  for (const auto& v : violations) os << "violation: " << v << '\n';
  for (const auto& n : notes) os << "note: " << n << '\n';
  return os.str();
}

ValidationReport validate_tree(const WeightedGraph& g, const DecompTree& t) {
  ValidationReport report;
  const auto& params = t.params();
  report.h = t.h();
  report.max_depth = t.max_depth();
  const std::size_t n = g.num_vertices();
  if (t.num_vertices() != n) {
    report.violations.push_back("tree was built for a graph with " +
                                std::to_string(t.num_vertices()) + " vertices, not " +
                                std::to_string(n));
    return report;
  }
  std::vector<std::vector<EdgeId>> expected(t.size());
  expected[0].resize(g.num_edges());
  std::iota(expected[0].begin(), expected[0].end(), EdgeId{0});
  {
    std::vector<Vertex> all(n);
    std::iota(all.begin(), all.end(), Vertex{0});
    if (t.root().vertices != all) report.violations.push_back("root vertex set is not V");
  }
  std::vector<std::size_t> multiplicity(g.num_edges(), 0);

  for (std::size_t i = 0; i < t.size(); ++i) {
    const DecompNode& node = t.node(i);
    const std::string b = show(node.label);
    const std::size_t size = node.vertices.size();
    const auto& edges = expected[i];
    for (EdgeId id : edges) ++multiplicity[id];
    if (node.edges != edges) report.violations.push_back(b + ": stored edge set differs from rule");
    if (node.depth() > report.h) {
      report.violations.push_back(b + ": depth " + std::to_string(node.depth()) + " exceeds h");
    }
    if (!std::is_sorted(node.vertices.begin(), node.vertices.end()) ||
        !std::is_sorted(node.separator.begin(), node.separator.end())) {
      report.violations.push_back(b + ": vertex lists are not sorted");
      continue;
    }
    if (node.is_leaf()) {
      if (!node.separator.empty()) report.violations.push_back(b + ": leaf has a separator");
      if (size > params.leaf_size) {
        bool certified = false;
        if (size <= kExhaustiveLimit) {
          Subgraph sub = edge_subgraph(g, node.vertices, edges);
          certified = !exhaustive_separator(sub.graph, params).has_value();
        }
        (certified ? report.notes : report.violations)
            .push_back(b + ": leaf has " + std::to_string(size) + " > c=" +
                       std::to_string(params.leaf_size) + " vertices" +
                       (certified ? " (no valid separator exists)" : ""));
      }
      continue;
    }
    const DecompNode& c0 = t.node(node.children[0]);
    const DecompNode& c1 = t.node(node.children[1]);
    if (c0.label != node.label + "0" || c1.label != node.label + "1" ||
        c0.parent != static_cast<int>(i) || c1.parent != static_cast<int>(i)) {
      report.violations.push_back(b + ": malformed child links");
      continue;
    }
    const auto& s = node.separator;
    bool subset_ok = std::includes(node.vertices.begin(), node.vertices.end(), s.begin(), s.end()) &&
                     std::includes(c0.vertices.begin(), c0.vertices.end(), s.begin(), s.end()) &&
                     std::includes(c1.vertices.begin(), c1.vertices.end(), s.begin(), s.end());
    std::vector<Vertex> side_a, side_b, both, all;
    std::set_difference(c0.vertices.begin(), c0.vertices.end(), s.begin(), s.end(),
                        std::back_inserter(side_a));
    std::set_difference(c1.vertices.begin(), c1.vertices.end(), s.begin(), s.end(),
                        std::back_inserter(side_b));
    std::set_intersection(side_a.begin(), side_a.end(), side_b.begin(), side_b.end(),
                          std::back_inserter(both));
    all = merged(merged(side_a, side_b), s);
    if (!subset_ok || !both.empty() || all != node.vertices) {
      report.violations.push_back(b + ": separator and sides do not partition V_b");
      continue;
    }
    expected[node.children[0]] = child_edges(g, edges, c0.vertices, s);
    expected[node.children[1]] = child_edges(g, edges, c1.vertices, s);

    std::unordered_map<Vertex, int> where;
    for (Vertex v : side_a) where[v] = 0;
    for (Vertex v : side_b) where[v] = 1;
    for (Vertex v : s) where[v] = 2;
    for (EdgeId id : edges) {
      const Edge& e = g.edge(id);
      int x = where.at(e.u), y = where.at(e.v);
      if ((x == 0 && y == 1) || (x == 1 && y == 0)) {
        report.violations.push_back(b + ": edge (" + std::to_string(e.u) + "," +
                                    std::to_string(e.v) + ") joins the two sides");
      }
    }
    if (s.size() > params.p) {
      report.violations.push_back(b + ": separator size " + std::to_string(s.size()) +
                                  " exceeds p=" + std::to_string(params.p));
    }
    // Components of G_b - S_b.
    std::unordered_map<Vertex, std::vector<Vertex>> adj;
    for (EdgeId id : edges) {
      const Edge& e = g.edge(id);
      if (where[e.u] == 2 || where[e.v] == 2) continue;
      adj[e.u].push_back(e.v);
      adj[e.v].push_back(e.u);
    }
    std::unordered_map<Vertex, char> seen;
    for (Vertex start : merged(side_a, side_b)) {
      if (seen[start]) continue;
      std::vector<Vertex> stack{start};
      seen[start] = 1;
      std::size_t count = 0;
      while (!stack.empty()) {
        Vertex u = stack.back();
        stack.pop_back();
        ++count;
        for (Vertex w : adj[u]) {
          if (!seen[w]) {
            seen[w] = 1;
            stack.push_back(w);
          }
        }
      }
      if (static_cast<double>(count) > params.q * static_cast<double>(size) + kSlack) {
        report.violations.push_back(b + ": component of size " + std::to_string(count) +
                                    " exceeds q|V_b|");
      }
    }
    const double part = static_cast<double>(std::max(c0.vertices.size(), c1.vertices.size()));
    if (part > params.q_prime * static_cast<double>(size) + kSlack) {
      report.violations.push_back(b + ": child of size " + std::to_string(c0.vertices.size()) +
                                  "/" + std::to_string(c1.vertices.size()) + " exceeds q'|V_b|");
    }
  }
  for (EdgeId id = 0; id < multiplicity.size(); ++id) {
    report.max_edge_multiplicity = std::max(report.max_edge_multiplicity, multiplicity[id]);
  }
  // A root-to-leaf chain has up to h + 1 nodes, so an edge that survives to
  // a leaf at depth h lies in h + 1 subgraphs. Anything beyond that means the
  // child edge rule was broken.
  if (report.max_edge_multiplicity > report.h + 1) {
    report.violations.push_back("an edge lies in " + std::to_string(report.max_edge_multiplicity) +
                                " node subgraphs, more than h+1=" + std::to_string(report.h + 1));
  } else if (report.max_edge_multiplicity > report.h) {
    report.notes.push_back("an edge lies in " + std::to_string(report.max_edge_multiplicity) +
                           " node subgraphs (h+1, a leaf at depth h)");
  }
  return report;
}

void write_tree_json(std::ostream& out, const DecompTree& t) {
  using nlohmann::json;
  const auto& p = t.params();
  json doc;
  doc["n"] = t.num_vertices();
  doc["h"] = t.h();
  doc["params"] = {{"p", p.p == std::numeric_limits<std::size_t>::max() ? json(nullptr) : json(p.p)},
                   {"q", p.q},
                   {"q_prime", p.q_prime},
                   {"c", p.leaf_size}};
  json nodes = json::array();
  for (const auto& node : t.nodes()) {
    json j;
    j["b"] = node.label;
    j["size_v"] = node.vertices.size();
    j["size_s"] = node.separator.size();
    j["leaf"] = node.is_leaf();
    j["children"] = node.is_leaf() ? json::array()
                                   : json::array({node.label + "0", node.label + "1"});
    j["vertices"] = node.vertices;
    j["separator"] = node.separator;
    nodes.push_back(std::move(j));
  }
  doc["nodes"] = std::move(nodes);
  out << doc.dump(1) << '\n';
}

DecompTree read_tree_json(std::istream& in, const WeightedGraph& g) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(in);
    SeparationParams p;
    p.p = doc["params"]["p"].is_null() ? std::numeric_limits<std::size_t>::max()
                                       : doc["params"]["p"].get<std::size_t>();
    p.q = doc["params"]["q"].get<double>();
    p.q_prime = doc["params"]["q_prime"].get<double>();
    p.leaf_size = doc["params"]["c"].get<std::size_t>();
    const std::size_t n = doc["n"].get<std::size_t>();
    if (n != g.num_vertices()) throw InputError("tree file does not match the graph");
    std::vector<DecompNode> nodes;
    std::unordered_map<std::string, std::size_t> index;
    for (const auto& j : doc["nodes"]) {
      DecompNode node;
      node.label = j["b"].get<std::string>();
      node.vertices = j["vertices"].get<std::vector<Vertex>>();
      node.separator = j["separator"].get<std::vector<Vertex>>();
      for (Vertex v : node.vertices) {
        if (v >= n) throw InputError("tree file: vertex id out of range");
      }
      if (!index.emplace(node.label, nodes.size()).second) {
        throw InputError("tree file: repeated label " + node.label);
      }
      nodes.push_back(std::move(node));
    }
    if (nodes.empty() || !nodes[0].label.empty()) throw InputError("tree file: root must come first");
    for (std::size_t i = 1; i < nodes.size(); ++i) {
      const std::string& label = nodes[i].label;
      auto it = index.find(label.substr(0, label.size() - 1));
      if (it == index.end() || (label.back() != '0' && label.back() != '1')) {
        throw InputError("tree file: node " + label + " has no parent");
      }
      nodes[i].parent = static_cast<int>(it->second);
      nodes[it->second].children[label.back() - '0'] = static_cast<int>(i);
    }
    nodes[0].edges.resize(g.num_edges());
    std::iota(nodes[0].edges.begin(), nodes[0].edges.end(), EdgeId{0});
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if ((nodes[i].children[0] < 0) != (nodes[i].children[1] < 0)) {
        throw InputError("tree file: node with a single child");
      }
      if (nodes[i].is_leaf()) continue;
      for (int c : nodes[i].children) {
        if (static_cast<std::size_t>(c) < i) throw InputError("tree file: nodes not breadth-first");
        nodes[c].edges = child_edges(g, nodes[i].edges, nodes[c].vertices, nodes[i].separator);
      }
    }
    return DecompTree(n, p, std::move(nodes));
  } catch (const json::exception& e) {
    throw InputError(std::string("tree file: ") + e.what());
  }
}

}  // namespace dpapsd
