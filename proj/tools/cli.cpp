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

#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <memory>
#include <ostream>

#include "CLI11.hpp"
#include "dpapsd/apsd.hpp"
#include "dpapsd/decomposition.hpp"
#include "dpapsd/errors.hpp"
#include "dpapsd/harness.hpp"
#include "dpapsd/shortcuts.hpp"

namespace dpapsd {

namespace {

constexpr const char* kZeroNoiseWarning =
    "WARNING: --zero-noise is a debugging mode. No noise is added and the output is NOT "
    "differentially private.";

GridShape parse_grid(const std::string& text) {
  const auto x = text.find_first_of("xX");
  if (x == std::string::npos) throw ParameterError("--grid expects RxC, got '" + text + "'");
  try {
    return {std::stoul(text.substr(0, x)), std::stoul(text.substr(x + 1))};
  } catch (const std::exception&) {
    throw ParameterError("--grid expects RxC, got '" + text + "'");
  }
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config '" + path + "'");
  return parse_config(in);
}

WeightedGraph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open graph '" + path + "'");
  return read_graph(in);
}

struct Options {
  std::string graph, config, out, tree, build_dir, mechanism, strategy, grid, td, mode, family;
  std::uint64_t seed = 1;
  double epsilon = 1.0, delta = 1e-6, weight_cap = 0.0;
  std::size_t k = 0, leaf_size = 4, n = 0, rows = 0, cols = 0;
  bool zero_noise = false;
  std::vector<std::uint32_t> pair;
};

int do_generate(const Options& o, std::ostream& out) {
  GraphSpec spec;
  if (!o.config.empty()) spec = load_config(o.config).graph;
  if (!o.family.empty()) spec.family = parse_family(o.family);
  if (o.n) spec.n = o.n;
  if (o.rows) spec.rows = o.rows;
  if (o.cols) spec.cols = o.cols;
  if (o.weight_cap > 0) {
    spec.unit_weights = false;
    spec.weight_cap = o.weight_cap;
  }
  auto gen = generate_graph(spec, o.seed);
  if (o.out.empty()) {
    write_graph(out, gen.graph);
  } else {
    std::ofstream f(o.out);
    write_graph(f, gen.graph);
    out << "wrote " << o.out << " (n=" << gen.graph.num_vertices()
        << ", m=" << gen.graph.num_edges() << ")\n";
  }
  return 0;
}

int do_build(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.graph.empty() || o.out.empty()) throw ParameterError("build needs --graph and --out");
  WeightedGraph g = load_graph(o.graph);
  SeparationParams params;
  params.leaf_size = o.leaf_size;
  SeparatorConfig sc;
  if (!o.grid.empty()) {
    sc.grid = parse_grid(o.grid);
    sc.strategy = SeparatorStrategy::kGridAxis;
  }
  if (!o.td.empty()) {
    std::ifstream in(o.td);
    if (!in) throw InputError("cannot open tree decomposition '" + o.td + "'");
    sc.tree_decomposition = std::make_shared<TreeDecomposition>(read_tree_decomposition(in));
    sc.strategy = SeparatorStrategy::kSuppliedTreeDecomposition;
  }
  if (!o.strategy.empty()) sc.strategy = parse_strategy(o.strategy);

  PrivacyBudget budget{o.epsilon, o.delta, parse_noise_mode(o.mode)};
  for (const auto& w : check_budget(budget)) err << "warning: " << w << '\n';
  if (o.zero_noise) err << kZeroNoiseWarning << '\n';

  const Mechanism mech = o.mechanism.empty() ? Mechanism::kGeneral : parse_mechanism(o.mechanism);
  if (mech != Mechanism::kGeneral && mech != Mechanism::kCovering) {
    throw ParameterError("build supports the general and covering mechanisms");
  }
  DecompTree tree = build_tree(g, params, sc);
  ShortcutOptions opts{o.zero_noise};
  ShortcutTable table;
  if (mech == Mechanism::kGeneral) {
    table = build_shortcuts_general(g, tree, budget, o.seed, opts);
  } else {
    if (o.k < 1) throw ParameterError("covering mechanism needs --k >= 1");
    table = build_shortcuts_covering(g, tree, budget, o.k, o.seed, opts);
  }
  DistanceMatrix est;
  {
    QueryContext ctx(tree, table, {.keep_intermediate = false});
    est = ctx.apsd_all();
  }
  BuildArtifacts b{std::move(g), std::move(tree), std::move(table), budget, o.seed};
  save_build(o.out, b, &est);
  const auto acc = accountant_check(b.table.noise, budget, b.table.releases_per_edge);
  out << "build written to " << o.out << ": h=" << b.tree.h() << " nodes=" << b.tree.size()
      << " entries=" << b.table.size() << '\n'
      << acc.to_string() << '\n';
  return 0;
}

int do_query(const Options& o, std::ostream& out) {
  if (o.build_dir.empty()) throw ParameterError("query needs --build DIR");
  if (o.pair.size() != 2) throw ParameterError("query needs two vertex ids");
  BuildArtifacts b = load_build(o.build_dir);
  const auto n = b.graph.num_vertices();
  if (o.pair[0] >= n || o.pair[1] >= n) throw ParameterError("vertex id out of range");
  QueryContext ctx(b.tree, b.table);
  out << format_distance(ctx.query_pair(o.pair[0], o.pair[1])) << '\n';
  return 0;
}

int do_experiment(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.config.empty()) throw ParameterError("experiment needs --config");
  ExperimentConfig cfg = load_config(o.config);
  if (!o.out.empty()) cfg.output = o.out;
  if (!o.mechanism.empty()) cfg.mechanism = parse_mechanism(o.mechanism);
  if (o.zero_noise) cfg.zero_noise = true;
  if (cfg.zero_noise) err << kZeroNoiseWarning << '\n';
  for (const auto& w : check_budget(cfg.budget)) err << "warning: " << w << '\n';
  ExperimentReport report = run_experiment(cfg);
  write_aggregate_csv(out, cfg, report);
  for (const auto& r : report.runs) {
    if (!r.ok) err << "seed " << r.seed << " failed: " << r.error << '\n';
  }
  return 0;
}

int do_validate(const Options& o, std::ostream& out) {
  if (o.graph.empty() || o.tree.empty()) throw ParameterError("validate needs --graph and --tree");
  WeightedGraph g = load_graph(o.graph);
  std::ifstream in(o.tree);
  if (!in) throw InputError("cannot open tree '" + o.tree + "'");
  DecompTree t = read_tree_json(in, g);
  ValidationReport rep = validate_tree(g, t);
  out << rep.to_string();
  return rep.ok() ? 0 : 1;
}

}  // namespace

int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Differentially private all-pairs shortest distances on separable graphs",
               "dpapsd_cli"};
  app.require_subcommand(1);
  Options o;

  auto* gen = app.add_subcommand("generate", "Generate a graph from a family");
  gen->add_option("--config", o.config, "Experiment config (graph keys are used)");
  gen->add_option("--family", o.family, "path | random-tree | grid | subgrid-planar");
  gen->add_option("--n", o.n, "Number of vertices");
  gen->add_option("--rows", o.rows, "Grid rows");
  gen->add_option("--cols", o.cols, "Grid columns");
  gen->add_option("--W", o.weight_cap, "Uniform weights on [0, W] (unit weights if omitted)");
  gen->add_option("--seed", o.seed, "Seed");
  gen->add_option("--out", o.out, "Output file (stdout if omitted)");

  auto* build = app.add_subcommand("build", "Release noisy shortcuts and persist a build");
  build->add_option("--graph", o.graph, "Graph file")->required();
  build->add_option("--out", o.out, "Build directory")->required();
  build->add_option("--mechanism", o.mechanism, "general | covering (default general)");
  build->add_option("--epsilon", o.epsilon, "Privacy epsilon")->default_val(1.0);
  build->add_option("--delta", o.delta, "Privacy delta")->default_val(1e-6);
  build->add_option("--mode", o.mode, "gaussian | laplace")->default_val("gaussian");
  build->add_option("--k", o.k, "Covering radius in hops (covering mechanism)");
  build->add_option("--leaf-size", o.leaf_size, "Leaf size c")->default_val(4);
  build->add_option("--strategy", o.strategy, "Separator strategy");
  build->add_option("--grid", o.grid, "Grid shape RxC for the grid-axis strategy");
  build->add_option("--td", o.td, "Tree decomposition file");
  build->add_option("--seed", o.seed, "Noise seed");
  build->add_flag("--zero-noise", o.zero_noise, "Debug only: no noise, NOT private");

  auto* query = app.add_subcommand("query", "Answer one pair from a persisted build");
  query->add_option("--build", o.build_dir, "Build directory")->required();
  query->add_option("pair", o.pair, "Vertex ids s t")->expected(2)->required();

  auto* exp = app.add_subcommand("experiment", "Run an experiment config");
  exp->add_option("--config", o.config, "Config file")->required();
  exp->add_option("--out", o.out, "Output directory (overrides the config)");
  exp->add_option("--mechanism", o.mechanism, "Override the mechanism");
  exp->add_flag("--zero-noise", o.zero_noise, "Debug only: no noise, NOT private");

  auto* val = app.add_subcommand("validate", "Check a decomposition tree");
  val->add_option("--graph", o.graph, "Graph file")->required();
  val->add_option("--tree", o.tree, "Tree JSON")->required();

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }
  try {
    if (*gen) return do_generate(o, out);
    if (*build) return do_build(o, out, err);
    if (*query) return do_query(o, out);
    if (*exp) return do_experiment(o, out, err);
    if (*val) return do_validate(o, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}

}  // namespace dpapsd
