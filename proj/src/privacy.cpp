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

#include "dpapsd/privacy.hpp"

#include <cmath>
#include <sstream>

#include "dpapsd/errors.hpp"

namespace dpapsd {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

bool at_most(double value, double bound) { return value <= bound * (1.0 + 1e-12); }

}  // namespace

std::string_view noise_mode_name(NoiseMode m) {
  return m == NoiseMode::kGaussian ? "gaussian" : "laplace";
}

NoiseMode parse_noise_mode(std::string_view name) {
  if (name == "gaussian") return NoiseMode::kGaussian;
  if (name == "laplace") return NoiseMode::kLaplace;
  throw ParameterError("unknown noise mode '" + std::string(name) + "'");
}

std::vector<std::string> check_budget(const PrivacyBudget& budget) {
  if (!(budget.epsilon > 0.0) || !std::isfinite(budget.epsilon)) {
    throw ParameterError("epsilon must be a positive finite number");
  }
  const bool gaussian = budget.mode == NoiseMode::kGaussian;
  if (gaussian ? !(budget.delta > 0.0) : !(budget.delta >= 0.0)) {
    throw ParameterError(gaussian ? "delta must be positive in Gaussian mode"
                                  : "delta must be nonnegative");
  }
  std::vector<std::string> warnings;
  if (budget.epsilon >= 1.0) {
    warnings.push_back("epsilon >= 1 lies outside the range covered by the privacy analysis");
  }
  if (budget.delta >= 1.0) {
    warnings.push_back("delta >= 1 lies outside the range covered by the privacy analysis");
  }
  return warnings;
}

DerivedNoiseParams derive_noise_params(const PrivacyBudget& budget, std::size_t h,
                                       double sensitivity_internal, double sensitivity_leaf) {
  DerivedNoiseParams out;
  out.warnings = check_budget(budget);
  if (h < 1) throw ParameterError("depth bound h must be at least 1");
  if (!(sensitivity_internal >= 1.0)) throw ParameterError("internal sensitivity must be >= 1");
  if (!(sensitivity_leaf > 0.0)) throw ParameterError("leaf sensitivity must be positive");
  out.mode = budget.mode;
  out.h = h;
  out.sensitivity_internal = sensitivity_internal;
  out.sensitivity_leaf = sensitivity_leaf;
  const double hd = static_cast<double>(h);
  if (budget.mode == NoiseMode::kGaussian) {
    out.delta_prime = budget.delta / (4.0 * hd);
    if (out.delta_prime >= 1.0) throw ParameterError("delta / (4h) must be below 1");
    out.eps_prime = budget.epsilon / std::sqrt(4.0 * hd * std::log(1.0 / out.delta_prime));
    const double factor = std::sqrt(2.0 * std::log(1.25 / out.delta_prime)) / out.eps_prime;
    out.sigma_internal = sensitivity_internal * factor;
    out.sigma_leaf = sensitivity_leaf * factor;
  } else {
    out.delta_prime = 0.0;
    out.eps_prime = budget.epsilon / (2.0 * hd);
    out.sigma_internal = sensitivity_internal / out.eps_prime;
    out.sigma_leaf = sensitivity_leaf / out.eps_prime;
  }
  return out;
}

std::uint64_t stream_seed(std::uint64_t seed, std::string_view label, ReleaseKind kind) {
  std::uint64_t x = splitmix64(seed);
  x = splitmix64(x ^ (static_cast<std::uint64_t>(kind) + 1));
  x = splitmix64(x ^ label.size());
  for (unsigned char ch : label) x = splitmix64(x ^ ch);
  return x;
}

RngStream::RngStream(std::uint64_t seed, std::string_view label, ReleaseKind kind)
    : engine_(stream_seed(seed, label, kind)) {}

double sample_gaussian(double scale, RngStream& rng) {
  if (!(scale > 0.0) || !std::isfinite(scale)) throw ParameterError("Gaussian scale must be positive");
  return scale * rng.standard_normal();
}

double sample_laplace(double scale, RngStream& rng) {
  if (!(scale > 0.0) || !std::isfinite(scale)) throw ParameterError("Laplace scale must be positive");
  const double magnitude = scale * rng.standard_exponential();
  return rng.coin() ? magnitude : -magnitude;
}

CompositionTotals advanced_composition_bound(std::size_t k, double eps_each, double delta_each,
                                             double delta_slack) {
  const double kd = static_cast<double>(k);
  CompositionTotals t;
  t.epsilon = std::sqrt(2.0 * kd * std::log(1.0 / delta_slack)) * eps_each +
              kd * eps_each * std::expm1(eps_each);
  t.delta = kd * delta_each + delta_slack;
  return t;
}

CompositionTotals basic_composition_bound(std::size_t k, double eps_each, double delta_each) {
  return {static_cast<double>(k) * eps_each, static_cast<double>(k) * delta_each};
}

std::string AccountantReport::to_string() const {
  std::ostringstream os;
  os.precision(6);
  os << (pass ? "PASS" : "FAIL") << " (" << rule << " composition over k=" << releases_per_edge
     << " releases per edge): epsilon_total=" << totals.epsilon
     << " delta_total=" << totals.delta;
  return os.str();
}

AccountantReport accountant_check(const DerivedNoiseParams& params, const PrivacyBudget& budget,
                                  std::size_t max_releases_per_edge) {
  AccountantReport r;
  r.releases_per_edge = max_releases_per_edge;
  if (params.mode == NoiseMode::kGaussian) {
    r.rule = "advanced";
    r.totals = advanced_composition_bound(max_releases_per_edge, params.eps_prime,
                                          params.delta_prime, params.delta_prime);
  } else {
    r.rule = "basic";
    r.totals = basic_composition_bound(max_releases_per_edge, params.eps_prime, 0.0);
  }
  r.pass = at_most(r.totals.epsilon, budget.epsilon) && at_most(r.totals.delta, budget.delta);
  return r;
}

}  // namespace dpapsd
