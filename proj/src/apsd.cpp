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

#include "dpapsd/apsd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "dpapsd/errors.hpp"

namespace dpapsd {

namespace {

constexpr std::size_t kAbsent = std::numeric_limits<std::size_t>::max();
const double kUnknown = std::numeric_limits<double>::quiet_NaN();

std::vector<std::int32_t> positions(std::span<const Vertex> of, std::span<const Vertex> in) {
  std::vector<std::int32_t> out(of.size(), -1);
  std::size_t j = 0;
  for (std::size_t i = 0; i < of.size(); ++i) {
    while (j < in.size() && in[j] < of[i]) ++j;
    if (j < in.size() && in[j] == of[i]) out[i] = static_cast<std::int32_t>(j);
  }
  return out;
}

}  // namespace

QueryContext::QueryContext(const DecompTree& tree, const ShortcutTable& table, QueryOptions options)
    : tree_(tree), table_(table), options_(options), state_(tree.size()) {
  if (table.num_nodes() != tree.size()) {
    throw InputError("shortcut table does not belong to this decomposition tree");
  }
}

std::size_t QueryContext::local_index(std::size_t node, Vertex v) const {
  const auto& vs = tree_.node(node).vertices;
  auto it = std::lower_bound(vs.begin(), vs.end(), v);
  if (it == vs.end() || *it != v) return kAbsent;
  return static_cast<std::size_t>(it - vs.begin());
}

QueryContext::NodeState& QueryContext::prepare(std::size_t node) {
  NodeState& st = state_[node];
  if (st.prepared) return st;
  const DecompNode& b = tree_.node(node);
  st.m = b.vertices.size();
  const auto& portals = table_.portals(node);
  st.portal_pos = positions(b.vertices, portals);
  if (b.parent >= 0) {
    st.parent_pos = positions(b.vertices, table_.portals(b.parent));
  } else {
    st.parent_pos.assign(st.m, -1);
  }
  if (!b.is_leaf()) {
    const std::size_t np = portals.size();
    for (int a = 0; a < 2; ++a) {
      st.child_index[a] = positions(b.vertices, tree_.node(b.children[a]).vertices);
      for (Vertex x : portals) {
        const auto ci = st.child_index[a][local_index(node, x)];
        if (ci < 0) throw std::logic_error("portal vertex missing from a child");
        st.portal_child[a].push_back(static_cast<std::uint32_t>(ci));
      }
    }
    auto must = [&](Vertex x, Vertex y) {
      auto v = table_.lookup(node, x, y);
      if (!v) {
        throw std::logic_error("missing shortcut (" + std::to_string(x) + "," +
                               std::to_string(y) + ") at b=" + b.label);
      }
      return *v;
    };
    st.within.assign(np * np, 0.0);
    for (std::size_t x = 0; x < np; ++x) {
      for (std::size_t y = 0; y < np; ++y) {
        if (x != y) st.within[x * np + y] = must(portals[x], portals[y]);
      }
    }
    if (b.parent >= 0) {
      const auto& pp = table_.portals(b.parent);
      st.cross.assign(np * pp.size(), 0.0);
      for (std::size_t x = 0; x < np; ++x) {
        for (std::size_t q = 0; q < pp.size(); ++q) {
          if (portals[x] != pp[q]) st.cross[x * pp.size() + q] = must(portals[x], pp[q]);
        }
      }
    }
  }
  st.prepared = true;
  return st;
}

bool QueryContext::is_shortcut(const NodeState& st, std::size_t node, std::size_t i,
                               std::size_t j) const {
  if (tree_.node(node).is_leaf()) return true;
  const bool pi = st.portal_pos[i] >= 0, pj = st.portal_pos[j] >= 0;
  return (pi && pj) || (pi && st.parent_pos[j] >= 0) || (pj && st.parent_pos[i] >= 0);
}

double QueryContext::shortcut(std::size_t node, std::size_t i, std::size_t j) const {
  const auto& vs = tree_.node(node).vertices;
  auto v = table_.lookup(node, vs[i], vs[j]);
  if (!v) {
    throw std::logic_error("missing shortcut (" + std::to_string(vs[i]) + "," +
                           std::to_string(vs[j]) + ") at b=" + tree_.node(node).label);
  }
  return *v;
}

double QueryContext::value(std::size_t node, std::size_t i, std::size_t j) {
  if (i == j) return 0.0;
  NodeState& st = prepare(node);
  if (st.released) throw std::logic_error("memo of b=" + tree_.node(node).label + " was released");
  if (st.memo.empty()) st.memo.assign(st.m * st.m, kUnknown);
  if (i > j) std::swap(i, j);
  double v = st.memo[i * st.m + j];
  if (!std::isnan(v)) return v;
  v = evaluate(node, i, j);
  if (std::isnan(v)) throw std::logic_error("NaN in reconstruction");
  // evaluate() may have grown other memos but never this node's storage.
  st.memo[i * st.m + j] = v;
  st.memo[j * st.m + i] = v;
  ++evaluations_;
  return v;
}

double QueryContext::evaluate(std::size_t node, std::size_t i, std::size_t j) {
  NodeState& st = state_[node];
  if (is_shortcut(st, node, i, j)) return shortcut(node, i, j);
  const DecompNode& b = tree_.node(node);
  const std::size_t np = table_.portals(node).size();
  double best = kInfinity;

  if (st.parent_pos[i] >= 0 || st.parent_pos[j] >= 0) {
    const std::size_t t = st.parent_pos[j] >= 0 ? j : i;
    const std::size_t s = t == j ? i : j;
    const std::size_t npp = table_.portals(b.parent).size();
    const std::size_t tq = static_cast<std::size_t>(st.parent_pos[t]);
    for (int a = 0; a < 2; ++a) {
      const auto cs = st.child_index[a][s];
      if (cs < 0) continue;
      const auto ct = st.child_index[a][t];
      const std::size_t child = static_cast<std::size_t>(b.children[a]);
      if (ct >= 0) best = std::min(best, value(child, cs, ct));
      for (std::size_t x = 0; x < np; ++x) {
        best = std::min(best, value(child, cs, st.portal_child[a][x]) + st.cross[x * npp + tq]);
      }
    }
    return best;
  }

  // Three-segment term through portals x then y.
  auto three = [&](int a, std::size_t cs, int c, std::size_t ct) {
    const std::size_t ca = static_cast<std::size_t>(b.children[a]);
    const std::size_t cc = static_cast<std::size_t>(b.children[c]);
    std::vector<double> head(np);
    for (std::size_t x = 0; x < np; ++x) head[x] = value(ca, cs, st.portal_child[a][x]);
    double out = kInfinity;
    for (std::size_t y = 0; y < np; ++y) {
      double f = kInfinity;
      for (std::size_t x = 0; x < np; ++x) f = std::min(f, head[x] + st.within[x * np + y]);
      out = std::min(out, f + value(cc, st.portal_child[c][y], ct));
    }
    return out;
  };

  bool common = false;
  for (int a = 0; a < 2; ++a) {
    const auto cs = st.child_index[a][i], ct = st.child_index[a][j];
    if (cs < 0 || ct < 0) continue;
    common = true;
    best = std::min(best, value(static_cast<std::size_t>(b.children[a]), cs, ct));
    best = std::min(best, three(a, cs, a, ct));
  }
  if (!common) {
    const int a = st.child_index[0][i] >= 0 ? 0 : 1;
    best = three(a, st.child_index[a][i], 1 - a, st.child_index[1 - a][j]);
  }
  return best;
}

void QueryContext::complete(std::size_t node) {
  NodeState& st = prepare(node);
  if (st.complete) return;
  if (st.released) throw std::logic_error("memo of b=" + tree_.node(node).label + " was released");
  const DecompNode& b = tree_.node(node);
  const std::size_t m = st.m;
  if (b.is_leaf()) {
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = i + 1; j < m; ++j) value(node, i, j);
    }
    st.complete = true;
    return;
  }
  for (int c : b.children) complete(static_cast<std::size_t>(c));
  if (st.memo.empty()) st.memo.assign(m * m, kUnknown);

  const std::size_t np = table_.portals(node).size();
  // F[a][s*np + y] = min_x M_a(s, x) + w(x, y);  G[a][s*np + y] = M_a(s, y).
  std::vector<double> f[2], g[2];
  const double* memo_child[2];
  std::size_t m_child[2];
  for (int a = 0; a < 2; ++a) {
    const NodeState& cs = state_[b.children[a]];
    memo_child[a] = cs.memo.data();
    m_child[a] = cs.m;
    f[a].assign(cs.m * np, kInfinity);
    g[a].assign(cs.m * np, kInfinity);
    for (std::size_t s = 0; s < cs.m; ++s) {
      const double* row = cs.m > 1 ? cs.memo.data() + s * cs.m : nullptr;
      for (std::size_t y = 0; y < np; ++y) {
        const std::size_t py = st.portal_child[a][y];
        g[a][s * np + y] = py == s ? 0.0 : row[py];
      }
      for (std::size_t y = 0; y < np; ++y) {
        double best = kInfinity;
        for (std::size_t x = 0; x < np; ++x) {
          best = std::min(best, g[a][s * np + x] + st.within[x * np + y]);
        }
        f[a][s * np + y] = best;
      }
    }
  }

  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      if (!std::isnan(st.memo[i * m + j])) continue;
      double v;
      if (is_shortcut(st, node, i, j) || st.parent_pos[i] >= 0 || st.parent_pos[j] >= 0) {
        v = evaluate(node, i, j);
      } else {
        v = kInfinity;
        bool common = false;
        for (int a = 0; a < 2; ++a) {
          const auto cs = st.child_index[a][i], ct = st.child_index[a][j];
          if (cs < 0 || ct < 0) continue;
          common = true;
          v = std::min(v, cs == ct ? 0.0 : memo_child[a][cs * m_child[a] + ct]);
          const double* fr = &f[a][cs * np];
          const double* gr = &g[a][ct * np];
          double t = kInfinity;
          for (std::size_t y = 0; y < np; ++y) t = std::min(t, fr[y] + gr[y]);
          v = std::min(v, t);
        }
        if (!common) {
          const int a = st.child_index[0][i] >= 0 ? 0 : 1;
          const double* fr = &f[a][st.child_index[a][i] * np];
          const double* gr = &g[1 - a][st.child_index[1 - a][j] * np];
          for (std::size_t y = 0; y < np; ++y) v = std::min(v, fr[y] + gr[y]);
        }
      }
      if (std::isnan(v)) throw std::logic_error("NaN in reconstruction");
      st.memo[i * m + j] = v;
      st.memo[j * m + i] = v;
      ++evaluations_;
    }
  }
  st.complete = true;
  if (!options_.keep_intermediate) {
    for (int c : b.children) {
      NodeState& cs = state_[c];
      std::vector<double>().swap(cs.memo);
      cs.released = true;
    }
  }
}

double QueryContext::recursive_apsd(std::string_view label, Vertex s, Vertex t, unsigned k) {
  auto node = tree_.find(label);
  if (!node) throw InputError("no tree node with label '" + std::string(label) + "'");
  return recursive_apsd(*node, s, t, k);
}

double QueryContext::recursive_apsd(std::size_t node, Vertex s, Vertex t, unsigned k) {
  if (node >= tree_.size()) throw InputError("tree node index out of range");
  const std::size_t i = local_index(node, s), j = local_index(node, t);
  if (i == kAbsent || j == kAbsent) return kInfinity;
  if (i == j) return 0.0;
  NodeState& st = prepare(node);
  if (k > 0 && st.parent_pos[i] < 0 && st.parent_pos[j] < 0) {
    throw FailError("FAIL: k>0 but neither endpoint lies in the parent portal set at b=" +
                    tree_.node(node).label);
  }
  return value(node, i, j);
}

double QueryContext::query_pair(Vertex s, Vertex t) {
  const std::size_t n = tree_.num_vertices();
  if (s >= n || t >= n) throw InputError("query vertex out of range");
  return recursive_apsd(std::size_t{0}, s, t, 0);
}

DistanceMatrix QueryContext::apsd_all() {
  complete(0);
  const std::size_t n = tree_.num_vertices();
  DistanceMatrix out(n);
  const auto& memo = state_[0].memo;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) out.at(i, j) = i == j ? 0.0 : memo[i * n + j];
  }
  return out;
}

}  // namespace dpapsd
