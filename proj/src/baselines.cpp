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

#include "dpapsd/baselines.hpp"

#include <algorithm>
#include <vector>

#include "dpapsd/errors.hpp"

namespace dpapsd {

WeightedGraph edge_noise_graph(const WeightedGraph& g, const PrivacyBudget& budget,
                               std::uint64_t seed, bool zero_noise) {
  check_budget(budget);
  RngStream rng(seed, "edge-noise", ReleaseKind::kEdge);
  std::vector<Edge> edges = g.edges();
  const double scale = 1.0 / budget.epsilon;
  for (Edge& e : edges) {
    double noise = zero_noise ? 0.0 : sample_laplace(scale, rng);
    e.w = std::max(0.0, e.w + noise);
  }
  return WeightedGraph(g.num_vertices(), std::move(edges));
}

BaselineResult edge_noise_apsd(const WeightedGraph& g, const PrivacyBudget& budget,
                               std::uint64_t seed, const BaselineOptions& options) {
  WeightedGraph noisy = edge_noise_graph(g, budget, seed, options.zero_noise);
  return {exact_apsd(noisy, 1), "edge-noise", budget, seed};
}

BaselineResult exact_baseline(const WeightedGraph& g) {
  return {exact_apsd(g, 1), "exact", {}, 0};
}

}  // namespace dpapsd
