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

#include "dpapsd/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

#include "dpapsd/baselines.hpp"
#include "dpapsd/errors.hpp"
#include "json.hpp"

namespace dpapsd {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    double d = std::stod(v, &used);
    if (used == v.size()) return d;
  } catch (const std::exception&) {
  }
  throw ParameterError("config: '" + key + "' expects a number, got '" + v + "'");
}

std::size_t to_size(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    unsigned long long x = std::stoull(v, &used);
    if (used == v.size() && v.find('-') == std::string::npos) return static_cast<std::size_t>(x);
  } catch (const std::exception&) {
  }
  throw ParameterError("config: '" + key + "' expects a nonnegative integer, got '" + v + "'");
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ParameterError("config: '" + key + "' expects true/false, got '" + v + "'");
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

std::size_t resolved_k(const ExperimentConfig& cfg, const WeightedGraph& g) {
  if (cfg.k) return *cfg.k;
  return default_covering_k(cfg.graph.family, g.num_vertices(), g.weight_cap(),
                            cfg.budget.epsilon);
}

}  // namespace

std::string_view mechanism_name(Mechanism m) {
  switch (m) {
    case Mechanism::kGeneral: return "general";
    case Mechanism::kCovering: return "covering";
    case Mechanism::kEdgeNoise: return "edge-noise";
    case Mechanism::kExact: return "exact";
  }
  return "unknown";
}

Mechanism parse_mechanism(std::string_view name) {
  for (auto m : {Mechanism::kGeneral, Mechanism::kCovering, Mechanism::kEdgeNoise,
                 Mechanism::kExact}) {
    if (mechanism_name(m) == name) return m;
  }
  throw ParameterError("unknown mechanism '" + std::string(name) + "'");
}

std::vector<std::uint64_t> parse_seeds(std::string_view text) {
  std::vector<std::uint64_t> out;
  const std::string s = trim(text);
  auto dots = s.find("..");
  if (dots != std::string::npos) {
    const auto lo = to_size("seeds", trim(s.substr(0, dots)));
    const auto hi = to_size("seeds", trim(s.substr(dots + 2)));
    if (hi < lo) throw ParameterError("config: empty seed range");
    for (auto x = lo; x <= hi; ++x) out.push_back(x);
    return out;
  }
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_size("seeds", trim(item)));
  if (out.empty()) throw ParameterError("config: no seeds given");
  return out;
}

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig cfg;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParameterError("config line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string v = trim(std::string_view(line).substr(eq + 1));
    if (key == "family") cfg.graph.family = parse_family(v);
    else if (key == "n") cfg.graph.n = to_size(key, v);
    else if (key == "rows") cfg.graph.rows = to_size(key, v);
    else if (key == "cols") cfg.graph.cols = to_size(key, v);
    else if (key == "weights") {
      if (v != "unit" && v != "uniform") throw ParameterError("config: weights must be unit or uniform");
      cfg.graph.unit_weights = v == "unit";
    } else if (key == "W") cfg.graph.weight_cap = to_double(key, v);
    else if (key == "mechanism") cfg.mechanism = parse_mechanism(v);
    else if (key == "c" || key == "leaf_size") cfg.separation.leaf_size = to_size(key, v);
    else if (key == "q") cfg.separation.q = to_double(key, v);
    else if (key == "q_prime") cfg.separation.q_prime = to_double(key, v);
    else if (key == "p") cfg.separation.p = to_size(key, v);
    else if (key == "strategy") cfg.strategy = parse_strategy(v);
    else if (key == "k") cfg.k = v == "auto" ? std::nullopt : std::optional(to_size(key, v));
    else if (key == "epsilon") cfg.budget.epsilon = to_double(key, v);
    else if (key == "delta") cfg.budget.delta = to_double(key, v);
    else if (key == "mode") cfg.budget.mode = parse_noise_mode(v);
    else if (key == "seeds") cfg.seeds = parse_seeds(v);
    else if (key == "output") cfg.output = v;
    else if (key == "zero_noise") cfg.zero_noise = to_bool(key, v);
    else if (key == "threads") cfg.threads = static_cast<unsigned>(to_size(key, v));
    else if (key == "gamma") cfg.gamma = to_double(key, v);
    else throw ParameterError("config: unknown key '" + key + "'");
  }
  if (cfg.mechanism == Mechanism::kCovering) {
    if (!cfg.graph.unit_weights && !(cfg.graph.weight_cap > 0.0)) {
      throw ParameterError("covering mechanism needs W > 0");
    }
    if (cfg.k && *cfg.k < 1) throw ParameterError("covering mechanism needs k >= 1");
  }
  check_budget(cfg.budget);
  return cfg;
}

ErrorStats error_stats(const DistanceMatrix& exact, const DistanceMatrix& estimate) {
  if (exact.size() != estimate.size()) throw std::logic_error("matrix size mismatch");
  const std::size_t n = exact.size();
  std::vector<double> errors;
  errors.reserve(n * (n - (n > 0)) / 2);
  long double sum = 0.0L;
  for (std::size_t i = 0; i < n; ++i) {
    const double* er = exact.row(i);
    const double* dr = estimate.row(i);
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::isinf(er[j]) || std::isinf(dr[j])) {
        if (std::isinf(er[j]) != std::isinf(dr[j])) {
          throw std::logic_error("estimate and exact disagree on reachability of (" +
                                 std::to_string(i) + "," + std::to_string(j) + ")");
        }
        continue;
      }
      const double e = std::abs(dr[j] - er[j]);
      errors.push_back(e);
      sum += e;
    }
  }
  ErrorStats s;
  s.pairs = errors.size();
  if (errors.empty()) return s;
  s.mean = static_cast<double>(sum / static_cast<long double>(errors.size()));
  auto quantile = [&](double q) {
    auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(errors.size())));
    auto it = errors.begin() + static_cast<std::ptrdiff_t>(std::max<std::size_t>(rank, 1) - 1);
    std::nth_element(errors.begin(), it, errors.end());
    return *it;
  };
  s.max = *std::max_element(errors.begin(), errors.end());
  s.p95 = quantile(0.95);
  s.p50 = quantile(0.50);
  return s;
}

double error_envelope(const ShortcutTable& table, double gamma, double weight_cap) {
  const auto& noise = table.noise;
  const double h = static_cast<double>(noise.h);
  const double pc = static_cast<double>(std::max(table.portal_bound, table.leaf_bound));
  double z1 = 0.0, z2 = 0.0;
  if (!table.zero_noise) {
    if (noise.mode == NoiseMode::kGaussian) {
      const double f = std::sqrt(2.0 * (h + 3.0 * std::log(pc) + std::log(1.0 / (2.0 * gamma))));
      z1 = noise.sigma_leaf * f;
      z2 = noise.sigma_internal * f;
    } else {
      const double m = 5.0 * std::ldexp(1.0, static_cast<int>(noise.h)) * pc * pc;
      const double f = std::log(m / gamma);
      z1 = noise.sigma_leaf * f;
      z2 = noise.sigma_internal * f;
    }
  }
  double env = 2.0 * (z1 + h * z2);
  if (table.variant() == Variant::kCovering) {
    env += 2.0 * h * static_cast<double>(table.k()) * weight_cap;
  }
  return env;
}

RunRecord run_single(const ExperimentConfig& cfg, std::uint64_t seed, const DistanceMatrix* exact) {
  RunRecord rec;
  rec.seed = seed;
  const auto start = std::chrono::steady_clock::now();
  try {
    GeneratedGraph gen = generate_graph(cfg.graph, seed);
    const WeightedGraph& g = gen.graph;
    rec.n = g.num_vertices();
    rec.m = g.num_edges();
    DistanceMatrix own;
    if (!exact) {
      own = exact_apsd(g, 1);
      exact = &own;
    }
    switch (cfg.mechanism) {
      case Mechanism::kExact:
        rec.stats = error_stats(*exact, *exact);
        break;
      case Mechanism::kEdgeNoise: {
        PrivacyBudget pure{cfg.budget.epsilon, 0.0, NoiseMode::kLaplace};
        auto result = edge_noise_apsd(g, pure, seed, {cfg.zero_noise});
        rec.stats = error_stats(*exact, result.estimates);
        AccountantReport acc;
        acc.pass = true;
        acc.rule = "laplace-vector";
        acc.releases_per_edge = 1;
        acc.totals = {cfg.budget.epsilon, 0.0};
        rec.accountant = acc;
        break;
      }
      case Mechanism::kGeneral:
      case Mechanism::kCovering: {
        SeparatorConfig sc;
        sc.strategy = cfg.strategy.value_or(gen.default_strategy);
        sc.grid = gen.grid;
        DecompTree tree = build_tree(g, cfg.separation, sc);
        ShortcutOptions opts{cfg.zero_noise};
        ShortcutTable table;
        if (cfg.mechanism == Mechanism::kGeneral) {
          table = build_shortcuts_general(g, tree, cfg.budget, seed, opts);
        } else {
          rec.k = resolved_k(cfg, g);
          table = build_shortcuts_covering(g, tree, cfg.budget, rec.k, seed, opts);
        }
        QueryContext ctx(tree, table, {.keep_intermediate = false});
        DistanceMatrix est = ctx.apsd_all();
        rec.stats = error_stats(*exact, est);
        rec.h = table.noise.h;
        rec.entries = table.size();
        rec.entry_bound = table.entry_bound();
        rec.sigma_internal = table.noise.sigma_internal;
        rec.sigma_leaf = table.noise.sigma_leaf;
        rec.envelope = error_envelope(table, cfg.gamma, g.weight_cap());
        rec.accountant = accountant_check(table.noise, cfg.budget, table.releases_per_edge);
        break;
      }
    }
    rec.ok = true;
  } catch (const std::exception& e) {
    rec.ok = false;
    rec.error = e.what();
  }
  rec.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  ExperimentReport report;
  report.runs.resize(cfg.seeds.size());
  const unsigned threads = std::max(1u, std::min<unsigned>(cfg.threads,
                                                           static_cast<unsigned>(cfg.seeds.size())));
  auto work = [&](std::size_t begin) {
    for (std::size_t i = begin; i < cfg.seeds.size(); i += threads) {
      report.runs[i] = run_single(cfg, cfg.seeds[i]);
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
  }
  std::vector<double> maxes, means, p95s, envs;
  std::size_t exceeded = 0, with_env = 0;
  for (const auto& r : report.runs) {
    if (!r.ok) {
      ++report.failed;
      continue;
    }
    maxes.push_back(r.stats.max);
    means.push_back(r.stats.mean);
    p95s.push_back(r.stats.p95);
    if (r.envelope > 0.0) {
      envs.push_back(r.envelope);
      ++with_env;
      if (r.stats.max > r.envelope) ++exceeded;
    }
    if (r.accountant && !r.accountant->pass) report.accountant_pass = false;
  }
  report.median_max_error = median(maxes);
  report.median_mean_error = median(means);
  report.median_p95_error = median(p95s);
  report.median_envelope = median(envs);
  report.envelope_exceed_fraction =
      with_env ? static_cast<double>(exceeded) / static_cast<double>(with_env) : 0.0;

  if (!cfg.output.empty()) {
    namespace fs = std::filesystem;
    fs::create_directories(cfg.output);
    std::ofstream report_csv(fs::path(cfg.output) / "report.csv");
    write_report_csv(report_csv, cfg, report);
    std::ofstream aggregate_csv(fs::path(cfg.output) / "aggregate.csv");
    write_aggregate_csv(aggregate_csv, cfg, report);
    std::ofstream timing(fs::path(cfg.output) / "timing.csv");
    timing << "seed,runtime_seconds\n";
    for (const auto& r : report.runs) timing << r.seed << ',' << r.runtime_seconds << '\n';
    nlohmann::json meta;
    meta["family"] = family_name(cfg.graph.family);
    meta["n"] = cfg.graph.n;
    meta["rows"] = cfg.graph.rows;
    meta["cols"] = cfg.graph.cols;
    meta["weights"] = cfg.graph.unit_weights ? "unit" : "uniform";
    meta["W"] = cfg.graph.weight_cap;
    meta["mechanism"] = mechanism_name(cfg.mechanism);
    meta["strategy"] = cfg.strategy ? std::string(strategy_name(*cfg.strategy)) : "family-default";
    meta["c"] = cfg.separation.leaf_size;
    meta["q"] = cfg.separation.q;
    meta["q_prime"] = cfg.separation.q_prime;
    meta["k"] = cfg.k ? nlohmann::json(*cfg.k) : nlohmann::json("auto");
    meta["epsilon"] = cfg.budget.epsilon;
    meta["delta"] = cfg.budget.delta;
    meta["mode"] = noise_mode_name(cfg.budget.mode);
    meta["seeds"] = cfg.seeds;
    meta["gamma"] = cfg.gamma;
    meta["zero_noise"] = cfg.zero_noise;
    if (cfg.zero_noise) meta["warning"] = "zero-noise debug mode: outputs are NOT private";
    std::ofstream(fs::path(cfg.output) / "meta.json") << meta.dump(1) << '\n';
  }
  return report;
}

void write_report_csv(std::ostream& out, const ExperimentConfig& cfg,
                      const ExperimentReport& report) {
  out << "seed,status,mechanism,n,m,h,k,max_error,mean_error,p50_error,p95_error,pairs,"
         "entries,entry_bound,sigma_internal,sigma_leaf,envelope,accountant_rule,"
         "accountant_pass,epsilon_total,delta_total,releases_per_edge,error\n";
  for (const auto& r : report.runs) {
    std::string err = r.error;
    std::replace(err.begin(), err.end(), ',', ';');
    std::replace(err.begin(), err.end(), '\n', ' ');
    out << r.seed << ',' << (r.ok ? "ok" : "failed") << ',' << mechanism_name(cfg.mechanism)
        << ',' << r.n << ',' << r.m << ',' << r.h << ',' << r.k << ','
        << format_distance(r.stats.max) << ',' << format_distance(r.stats.mean) << ','
        << format_distance(r.stats.p50) << ',' << format_distance(r.stats.p95) << ','
        << r.stats.pairs << ',' << r.entries << ',' << format_distance(r.entry_bound) << ','
        << format_distance(r.sigma_internal) << ',' << format_distance(r.sigma_leaf) << ','
        << format_distance(r.envelope) << ',';
    if (r.accountant) {
      out << r.accountant->rule << ',' << (r.accountant->pass ? "true" : "false") << ','
          << format_distance(r.accountant->totals.epsilon) << ','
          << format_distance(r.accountant->totals.delta) << ','
          << r.accountant->releases_per_edge;
    } else {
      out << ",,,,";
    }
    out << ',' << err << '\n';
  }
}

void write_aggregate_csv(std::ostream& out, const ExperimentConfig& cfg,
                         const ExperimentReport& report) {
  out << "mechanism,family,seeds,failed,median_max_error,median_mean_error,median_p95_error,"
         "median_envelope,envelope_exceed_fraction,accountant_pass\n";
  out << mechanism_name(cfg.mechanism) << ',' << family_name(cfg.graph.family) << ','
      << report.runs.size() << ',' << report.failed << ','
      << format_distance(report.median_max_error) << ','
      << format_distance(report.median_mean_error) << ','
      << format_distance(report.median_p95_error) << ','
      << format_distance(report.median_envelope) << ','
      << format_distance(report.envelope_exceed_fraction) << ','
      << (report.accountant_pass ? "true" : "false") << '\n';
}

void write_matrix_csv(std::ostream& out, const DistanceMatrix& d) {
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (std::size_t j = 0; j < d.size(); ++j) {
      if (j) out << ',';
      out << format_distance(d.at(i, j));
    }
    out << '\n';
  }
}

void save_build(const std::filesystem::path& dir, const BuildArtifacts& build,
                const DistanceMatrix* estimates) {
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "graph.txt") << [&] {
    std::ostringstream os;
    write_graph(os, build.graph);
    return os.str();
  }();
  {
    std::ofstream tree(dir / "tree.json");
    write_tree_json(tree, build.tree);
  }
  {
    std::ofstream csv(dir / "shortcuts.csv");
    write_shortcuts_csv(csv, build.table);
  }
  const auto& t = build.table;
  nlohmann::json meta;
  meta["variant"] = variant_name(t.variant());
  meta["k"] = t.k();
  meta["seed"] = build.seed;
  meta["budget"] = {{"epsilon", build.budget.epsilon},
                    {"delta", build.budget.delta},
                    {"mode", noise_mode_name(build.budget.mode)}};
  meta["noise"] = {{"h", t.noise.h},
                   {"eps_prime", t.noise.eps_prime},
                   {"delta_prime", t.noise.delta_prime},
                   {"sensitivity_internal", t.noise.sensitivity_internal},
                   {"sensitivity_leaf", t.noise.sensitivity_leaf},
                   {"sigma_internal", t.noise.sigma_internal},
                   {"sigma_leaf", t.noise.sigma_leaf}};
  meta["portal_bound"] = t.portal_bound;
  meta["leaf_bound"] = t.leaf_bound;
  meta["releases_per_edge"] = t.releases_per_edge;
  meta["zero_noise"] = t.zero_noise;
  if (t.zero_noise) meta["warning"] = "zero-noise debug mode: outputs are NOT private";
  nlohmann::json portals = nlohmann::json::object();
  for (std::size_t i = 0; i < t.num_nodes(); ++i) {
    if (!t.portals(i).empty()) portals[t.label(i)] = t.portals(i);
  }
  meta["portals"] = std::move(portals);
  std::ofstream(dir / "meta.json") << meta.dump(1) << '\n';
  if (estimates) {
    std::ofstream est(dir / "estimates.csv");
    write_matrix_csv(est, *estimates);
  }
}

BuildArtifacts load_build(const std::filesystem::path& dir) {
  auto open = [&](const char* name) {
    std::ifstream in(dir / name);
    if (!in) throw InputError("build directory is missing " + std::string(name));
    return in;
  };
  BuildArtifacts b;
  {
    auto in = open("graph.txt");
    b.graph = read_graph(in);
  }
  {
    auto in = open("tree.json");
    b.tree = read_tree_json(in, b.graph);
  }
  nlohmann::json meta;
  try {
    auto in = open("meta.json");
    meta = nlohmann::json::parse(in);
    std::vector<std::vector<Vertex>> portals(b.tree.size());
    for (auto& [label, list] : meta["portals"].items()) {
      auto node = b.tree.find(label);
      if (!node) throw InputError("meta.json: unknown node label '" + label + "'");
      portals[*node] = list.get<std::vector<Vertex>>();
    }
    b.table = ShortcutTable(b.tree, parse_variant(meta["variant"].get<std::string>()),
                            meta["k"].get<std::size_t>(), std::move(portals));
    b.seed = meta["seed"].get<std::uint64_t>();
    b.budget.epsilon = meta["budget"]["epsilon"].get<double>();
    b.budget.delta = meta["budget"]["delta"].get<double>();
    b.budget.mode = parse_noise_mode(meta["budget"]["mode"].get<std::string>());
    const auto& nz = meta["noise"];
    b.table.noise.mode = b.budget.mode;
    b.table.noise.h = nz["h"].get<std::size_t>();
    b.table.noise.eps_prime = nz["eps_prime"].get<double>();
    b.table.noise.delta_prime = nz["delta_prime"].get<double>();
    b.table.noise.sensitivity_internal = nz["sensitivity_internal"].get<double>();
    b.table.noise.sensitivity_leaf = nz["sensitivity_leaf"].get<double>();
    b.table.noise.sigma_internal = nz["sigma_internal"].get<double>();
    b.table.noise.sigma_leaf = nz["sigma_leaf"].get<double>();
    b.table.portal_bound = meta["portal_bound"].get<std::size_t>();
    b.table.leaf_bound = meta["leaf_bound"].get<std::size_t>();
    b.table.releases_per_edge = meta["releases_per_edge"].get<std::size_t>();
    b.table.zero_noise = meta["zero_noise"].get<bool>();
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("meta.json: ") + e.what());
  }
  auto in = open("shortcuts.csv");
  read_shortcuts_csv(in, b.table);
  return b;
}

}  // namespace dpapsd
