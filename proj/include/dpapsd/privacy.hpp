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

#ifndef DPAPSD_PRIVACY_HPP_
#define DPAPSD_PRIVACY_HPP_

#include <cstddef>
#include <cstdint>
#include <algorithm>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace dpapsd {

enum class NoiseMode { kGaussian, kLaplace };

std::string_view noise_mode_name(NoiseMode m);
NoiseMode parse_noise_mode(std::string_view name);

struct PrivacyBudget {
  double epsilon = 1.0;
  double delta = 1e-6;
  NoiseMode mode = NoiseMode::kGaussian;
};

// Throws ParameterError for epsilon <= 0, or delta <= 0 in Gaussian mode.
// Returns warnings for epsilon >= 1 or delta >= 1.
std::vector<std::string> check_budget(const PrivacyBudget& budget);

// Gaussian mode: per-release (eps', delta') and standard deviations.
// Laplace mode: eps' = epsilon / (2h) per release, delta' = 0, and the sigma
// fields hold Laplace scales (sensitivities are then l1 sensitivities).
struct DerivedNoiseParams {
  NoiseMode mode = NoiseMode::kGaussian;
  std::size_t h = 1;
  double eps_prime = 0.0;
  double delta_prime = 0.0;
  double sensitivity_internal = 0.0;
  double sensitivity_leaf = 0.0;
  double sigma_internal = 0.0;
  double sigma_leaf = 0.0;
  std::vector<std::string> warnings;
};

DerivedNoiseParams derive_noise_params(const PrivacyBudget& budget, std::size_t h,
                                       double sensitivity_internal, double sensitivity_leaf);

// l2 and l1 sensitivities of a leaf release over at most c vertices.
inline double leaf_l2_sensitivity(std::size_t c) { return static_cast<double>(c); }
inline double leaf_l1_sensitivity(std::size_t c) {
  return std::max(1.0, static_cast<double>(c) * static_cast<double>(c - (c > 0)) / 2.0);
}

enum class ReleaseKind : std::uint8_t { kWithinSeparator = 0, kCrossLevel = 1, kLeaf = 2, kEdge = 3 };

// Noise stream keyed by (seed, node label, release kind).
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::string_view label, ReleaseKind kind);

  std::mt19937_64& engine() { return engine_; }
  double standard_normal() { return normal_(engine_); }
  double standard_exponential() { return exponential_(engine_); }
  bool coin() { return (engine_() >> 63) != 0; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::exponential_distribution<double> exponential_{1.0};
};

std::uint64_t stream_seed(std::uint64_t seed, std::string_view label, ReleaseKind kind);

// Throw ParameterError for scale <= 0.
double sample_gaussian(double scale, RngStream& rng);
double sample_laplace(double scale, RngStream& rng);

struct CompositionTotals {
  double epsilon = 0.0;
  double delta = 0.0;
};

CompositionTotals advanced_composition_bound(std::size_t k, double eps_each, double delta_each,
                                             double delta_slack);
CompositionTotals basic_composition_bound(std::size_t k, double eps_each, double delta_each);

struct AccountantReport {
  bool pass = false;
  std::string rule;  // "advanced" or "basic"
  std::size_t releases_per_edge = 0;
  CompositionTotals totals;
  std::string to_string() const;
};

// Gaussian mode: advanced composition of (eps', delta') over k releases with
// slack delta'. Laplace mode: basic composition of eps' over k releases.
AccountantReport accountant_check(const DerivedNoiseParams& params, const PrivacyBudget& budget,
                                  std::size_t max_releases_per_edge);

}  // namespace dpapsd

#endif  // DPAPSD_PRIVACY_HPP_
