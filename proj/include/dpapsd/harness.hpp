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

#ifndef DPAPSD_HARNESS_HPP_
#define DPAPSD_HARNESS_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dpapsd/apsd.hpp"
#include "dpapsd/decomposition.hpp"
#include "dpapsd/graph.hpp"
#include "dpapsd/privacy.hpp"
#include "dpapsd/shortcuts.hpp"

namespace dpapsd {

enum class GraphFamily { kPath, kRandomTree, kGrid, kSubgridPlanar };

std::string_view family_name(GraphFamily f);
GraphFamily parse_family(std::string_view name);

struct GraphSpec {
  GraphFamily family = GraphFamily::kPath;
  std::size_t n = 0;     // grids: may be 0 when rows and cols are given
  std::size_t rows = 0;  // grid families
  std::size_t cols = 0;
  bool unit_weights = true;
  double weight_cap = 1.0;  // W; unit weights declare W = 1
};

struct GeneratedGraph {
  WeightedGraph graph;
  std::optional<GridShape> grid;  // set for the full grid family
  SeparatorStrategy default_strategy = SeparatorStrategy::kBfsLevel;
};

// Deterministic per seed. Subgrid-planar deletes 20% of the grid vertices
// and keeps the largest component, relabelled in increasing id order.
GeneratedGraph generate_graph(const GraphSpec& spec, std::uint64_t seed);

enum class Mechanism { kGeneral, kCovering, kEdgeNoise, kExact };

std::string_view mechanism_name(Mechanism m);
Mechanism parse_mechanism(std::string_view name);

struct ExperimentConfig {
  GraphSpec graph;
  Mechanism mechanism = Mechanism::kGeneral;
  SeparationParams separation;
  std::optional<SeparatorStrategy> strategy;  // family default when empty
  std::optional<std::size_t> k;               // covering radius, rule-based when empty
  PrivacyBudget budget;
  std::vector<std::uint64_t> seeds{1};
  std::string output;  // directory; empty = no files
  bool zero_noise = false;
  unsigned threads = 1;
  double gamma = 0.01;
};

// Flat "key = value" lines; '#' starts a comment. Throws ParameterError.
ExperimentConfig parse_config(std::istream& in);
// "1,2,5" or "1..20".
std::vector<std::uint64_t> parse_seeds(std::string_view text);

// Grids: round(n^(1/4) / sqrt(W eps)); other families: round(n^(1/3) / (eps W)^(2/3)).
// Both clamped to >= 1.
std::size_t default_covering_k(GraphFamily family, std::size_t n, double weight_cap,
                               double epsilon);

struct ErrorStats {
  double max = 0.0;
  double mean = 0.0;
  double p50 = 0.0;
  double p95 = 0.0;
  std::size_t pairs = 0;
};

// Over unordered pairs with finite exact distance. Throws std::logic_error if
// an infinite exact distance gets a finite estimate or vice versa.
ErrorStats error_stats(const DistanceMatrix& exact, const DistanceMatrix& estimate);

// High-probability bound on the max error: 2(zeta1 + h*zeta2) with
// zeta_i = sigma_i * sqrt(2(h + 3 ln max{p,c} + ln(1/(2 gamma)))) for
// Gaussian noise; Laplace noise uses sigma_i * ln(m / gamma) with
// m = 5 * 2^h * max{p,c}^2. The covering variant adds 2 h k W.
double error_envelope(const ShortcutTable& table, double gamma, double weight_cap);

struct RunRecord {
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t h = 0;
  std::size_t k = 0;
  ErrorStats stats;
  std::size_t entries = 0;
  double entry_bound = 0.0;
  double sigma_internal = 0.0;
  double sigma_leaf = 0.0;
  double envelope = 0.0;  // 0 when not applicable
  std::optional<AccountantReport> accountant;
  double runtime_seconds = 0.0;
};

struct ExperimentReport {
  std::vector<RunRecord> runs;
  std::size_t failed = 0;
  double median_max_error = 0.0;
  double median_mean_error = 0.0;
  double median_p95_error = 0.0;
  double median_envelope = 0.0;
  double envelope_exceed_fraction = 0.0;
  bool accountant_pass = true;
};

ExperimentReport run_experiment(const ExperimentConfig& config);
RunRecord run_single(const ExperimentConfig& config, std::uint64_t seed,
                     const DistanceMatrix* exact = nullptr);

void write_report_csv(std::ostream& out, const ExperimentConfig& config,
                      const ExperimentReport& report);
void write_aggregate_csv(std::ostream& out, const ExperimentConfig& config,
                         const ExperimentReport& report);

// Persisted build: graph.txt, tree.json, shortcuts.csv, meta.json,
// estimates.csv.
struct BuildArtifacts {
  WeightedGraph graph;
  DecompTree tree;
  ShortcutTable table;
  PrivacyBudget budget;
  std::uint64_t seed = 0;
};

void save_build(const std::filesystem::path& dir, const BuildArtifacts& build,
                const DistanceMatrix* estimates);
BuildArtifacts load_build(const std::filesystem::path& dir);

void write_matrix_csv(std::ostream& out, const DistanceMatrix& d);

}  // namespace dpapsd

#endif  // DPAPSD_HARNESS_HPP_
