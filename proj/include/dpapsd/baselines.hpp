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

#ifndef DPAPSD_BASELINES_HPP_
#define DPAPSD_BASELINES_HPP_

#include <cstdint>
#include <string>

#include "dpapsd/graph.hpp"
#include "dpapsd/privacy.hpp"

namespace dpapsd {

struct BaselineResult {
  DistanceMatrix estimates;
  std::string mechanism;
  PrivacyBudget budget;
  std::uint64_t seed = 0;
};

struct BaselineOptions {
  bool zero_noise = false;  // debug only
};

// Adds Laplace(1/epsilon) to every edge weight, clamps at 0, and returns
// the exact APSD of the noisy graph.
BaselineResult edge_noise_apsd(const WeightedGraph& g, const PrivacyBudget& budget,
                               std::uint64_t seed, const BaselineOptions& options = {});

// The noisy graph used by edge_noise_apsd (uncapped).
WeightedGraph edge_noise_graph(const WeightedGraph& g, const PrivacyBudget& budget,
                               std::uint64_t seed, bool zero_noise = false);

BaselineResult exact_baseline(const WeightedGraph& g);

}  // namespace dpapsd

#endif  // DPAPSD_BASELINES_HPP_
