// Copyright 2026 The alqc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "alqc/alqc.hpp"

namespace {

using namespace alqc;

struct GlobalOptions {
  std::string config_path;
  std::string out_dir = "alqc_out";
  std::optional<std::uint64_t> seed;
  std::size_t jobs = 1;
  std::string backend;
  std::vector<std::string> overrides;  // key=value, applied after --config
};

ExperimentConfig resolve_config(const GlobalOptions& g, ExperimentConfig base = {}) {
  ExperimentConfig c = g.config_path.empty() ? base : load_config(g.config_path, base);
  for (const std::string& kv : g.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
    detail::apply_key(c, std::string(csv::trim(std::string_view(kv).substr(0, eq))),
                      std::string(csv::trim(std::string_view(kv).substr(eq + 1))));
  }
  if (g.seed) c.seeds = derive_run_seeds(*g.seed, c.seeds.size());
  if (!g.backend.empty()) c.backend = parse_backend(g.backend);
  return c;
}

void print_curve(const SuiteResult& s) {
  std::printf("%s\n  %12s %8s %10s %10s\n", s.config.label().c_str(), "evaluations", "labels", "mean_acc", "std_acc");
  for (const CurvePoint& c : s.curve)
    std::printf("  %12llu %8zu %10.4f %10.4f\n", static_cast<unsigned long long>(c.evaluations), c.labeled_size,
                c.mean_accuracy, c.std_accuracy);
}

void print_ratio(const RatioEntry& r) {
  if (r.row.matched)
    std::printf("%-24s vs %-24s labeling %.3f  computation %.3f  (target %.4f)\n", r.al_suite.c_str(),
                r.non_al_suite.c_str(), r.row.labeling_ratio, r.row.computation_ratio, r.row.target_accuracy);
  else
    std::printf("%-24s vs %-24s not matched (target %.4f)\n", r.al_suite.c_str(), r.non_al_suite.c_str(),
                r.row.target_accuracy);
}

int cmd_gen_data(const GlobalOptions& g, int pattern, std::size_t n, std::size_t test_n, const std::string& scheme) {
  const Pattern p = Pattern::builtin(pattern);
  const std::uint64_t seed = g.seed.value_or(kDefaultMasterSeed);
  const PoolScheme sc = scheme == "evenly_spaced" ? PoolScheme::evenly_spaced
                        : scheme == "uniform_random"
                            ? PoolScheme::uniform_random
                            : throw ConfigError("unknown pool scheme '" + scheme + "'");
  const auto pool = label_all(p, generate_pool(p, n, derive_seed(seed, {stream::pool}), sc));
  const auto grid = generate_test_grid(p, test_n);
  std::filesystem::create_directories(g.out_dir);
  const auto pool_path = (std::filesystem::path(g.out_dir) / ("pool_p" + std::to_string(pattern) + ".csv")).string();
  const auto grid_path = (std::filesystem::path(g.out_dir) / ("test_p" + std::to_string(pattern) + ".csv")).string();
  csv::write_file(pool_path, points_to_csv(pool));
  csv::write_file(grid_path, points_to_csv(grid));
  std::printf("wrote %s (%zu points) and %s (%zu points)\n", pool_path.c_str(), pool.size(), grid_path.c_str(),
              grid.size());
  return 0;
}

int cmd_train(const GlobalOptions& g, bool al) {
  ExperimentConfig c = resolve_config(g);
  if (al && c.strategy == Strategy::none) c.strategy = Strategy::usamp;
  if (!al) c.strategy = Strategy::none;
  const SuiteResult s = run_suite(c, g.jobs);
  print_curve(s);
  emit_outputs({s}, {}, g.out_dir);
  std::printf("outputs in %s\n", g.out_dir.c_str());
  return 0;
}

int cmd_theory(const GlobalOptions& g, bool write_csv) {
  std::printf("%-8s %12s %10s %12s %12s\n", "pattern", "delta_beta", "vqc_max", "nevqc_max", "nevqc_rho2");
  std::string out = "pattern,delta_beta,vqc_max_accuracy,nevqc_max_accuracy,nevqc_rho2\n";
  for (const BoundRow& r : bound_table()) {
    std::printf("%-8d %12.6f %10.4f %12.4f %12.6f\n", r.pattern, r.delta_beta, r.vqc_bound, r.nevqc_bound,
                r.nevqc_rho2);
    out += std::to_string(r.pattern) + ',' + csv::format(r.delta_beta) + ',' + csv::format(r.vqc_bound) + ',' +
           csv::format(r.nevqc_bound) + ',' + csv::format(r.nevqc_rho2) + '\n';
  }
  if (write_csv) {
    std::filesystem::create_directories(g.out_dir);
    csv::write_file((std::filesystem::path(g.out_dir) / "theory.csv").string(), out);
  }
  return 0;
}

int cmd_route(const GlobalOptions& g, const std::string& circuit, std::vector<double> xs, double t1, double t2,
              const std::string& metric, bool write_csv) {
  if (xs.empty()) throw ConfigError("route: --xs is required");
  std::sort(xs.begin(), xs.end());
  const RouteMetric m = parse_route_metric(metric);
  const bool nevqc = is_nevqc(parse_circuit(circuit));
  const Schedule planned = nevqc ? plan_nevqc_route(xs, t1, t2, m) : plan_vqc_route(xs, t1, m);
  const Schedule naive = nevqc ? naive_nevqc_route(xs, t1, t2, m) : naive_vqc_route(xs, t1, m);
  std::printf("%6s %12s %12s %12s %10s\n", "step", "x", "theta1", "theta2", "leg");
  VisitPoint prev = planned.origin;
  for (std::size_t i = 0; i < planned.visits.size(); ++i) {
    const VisitPoint& v = planned.visits[i];
    std::printf("%6zu %12.6f %12.6f %12s %10.6f\n", i, v.x, v.theta[0],
                v.n_theta == 2 ? csv::format(v.theta[1], 8).c_str() : "-", leg_cost(prev, v, m));
    prev = v;
  }
  if (nevqc) {
    std::printf("group order:");
    for (int k : planned.group_order) std::printf(" %d", k);
    std::printf("\n");
  }
  std::printf("planned cost %.6f rad, naive cost %.6f rad (%s metric, rotation-parameter radians)\n",
              planned.total_cost, naive.total_cost, to_string(m).c_str());
  if (write_csv) {
    std::filesystem::create_directories(g.out_dir);
    csv::write_file((std::filesystem::path(g.out_dir) / "route.csv").string(), schedule_to_csv(planned));
  }
  return 0;
}

std::vector<RatioEntry> pair_ratios(const std::vector<SuiteResult>& suites) {
  std::vector<RatioEntry> ratios;
  for (const auto& al : suites) {
    if (al.config.strategy == Strategy::none) continue;
    for (const auto& base : suites) {
      if (base.config.strategy != Strategy::none || base.config.classifier != al.config.classifier ||
          base.config.pattern != al.config.pattern)
        continue;
      ratios.push_back({al.config.label(), base.config.label(), cost_ratios(al, base)});
    }
  }
  return ratios;
}

int cmd_reproduce(const GlobalOptions& g) {
  const ExperimentConfig base = resolve_config(g);
  std::vector<ExperimentConfig> cfgs;
  for (Circuit c : {Circuit::vqc, Circuit::nevqc})
    for (int p = 1; p <= 3; ++p)
      for (Strategy s : {Strategy::none, Strategy::usamp, Strategy::qbc}) {
        ExperimentConfig e = base;
        e.classifier = c;
        e.pattern = p;
        e.strategy = s;
        cfgs.push_back(e);
      }
  const auto suites = run_suites(cfgs, g.jobs);
  const auto ratios = pair_ratios(suites);
  for (const auto& r : ratios) print_ratio(r);
  emit_outputs(suites, ratios, g.out_dir);
  std::printf("outputs in %s\n", g.out_dir.c_str());
  return 0;
}

int cmd_compare(const GlobalOptions& g, std::vector<std::uint64_t> shots) {
  ExperimentConfig c = resolve_config(g);
  c.backend = Backend::analytic;
  if (shots.empty()) shots.push_back(c.resolved_shots());
  const SuiteResult exact = run_suite(c, g.jobs);
  std::string out = "shots,seed,loss_error,accuracy_error\n";
  std::printf("%10s %22s %12s %12s\n", "shots", "seed", "loss_err", "acc_err");
  for (std::uint64_t n : shots) {
    ExperimentConfig sc = c;
    sc.backend = Backend::sampled;
    sc.shots = n;
    const SuiteResult sampled = run_suite(sc, g.jobs);
    double mean_acc = 0.0, mean_loss = 0.0;
    for (std::size_t i = 0; i < exact.runs.size(); ++i) {
      const ErrorReport e = compare_to_analytic(sampled.runs[i].trace, exact.runs[i].trace);
      mean_acc += e.accuracy_error / static_cast<double>(exact.runs.size());
      mean_loss += e.loss_error / static_cast<double>(exact.runs.size());
      out += std::to_string(n) + ',' + std::to_string(c.seeds[i]) + ',' + csv::format(e.loss_error) + ',' +
             csv::format(e.accuracy_error) + '\n';
    }
    std::printf("%10llu %22s %12.5f %12.5f\n", static_cast<unsigned long long>(n), "mean", mean_loss, mean_acc);
  }
  std::filesystem::create_directories(g.out_dir);
  csv::write_file((std::filesystem::path(g.out_dir) / "compare.csv").string(), out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"alqc: active-learning quantum classifier simulator and experiment runner"};
  app.set_version_flag("--version", std::string(alqc::kVersion));
  app.require_subcommand(1);

  GlobalOptions g;
  std::uint64_t seed_value = 0;
  auto add_globals = [&](CLI::App* sub) {
    sub->add_option("--config", g.config_path, "flat key = value config file");
    sub->add_option("--out", g.out_dir, "output directory");
    sub->add_option("--seed", seed_value, "master seed");
    sub->add_option("--jobs", g.jobs, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--backend", g.backend, "analytic|sampled")->check(CLI::IsMember({"analytic", "sampled"}));
    sub->add_option("--set", g.overrides, "override a config key, e.g. --set pattern=2 (repeatable)");
  };

  int pattern = 1;
  std::size_t pool_n = 20, test_n = 500;
  std::string scheme = "uniform_random";
  auto* gen = app.add_subcommand("gen-data", "write a labelled pool and test grid as CSV");
  add_globals(gen);
  gen->add_option("--pattern", pattern, "pattern id (1-3)");
  gen->add_option("--n", pool_n, "pool size");
  gen->add_option("--test-size", test_n, "test grid size");
  gen->add_option("--scheme", scheme, "uniform_random|evenly_spaced");

  auto* train = app.add_subcommand("train", "train without active learning over all seeds");
  add_globals(train);
  auto* al = app.add_subcommand("al-train", "train with active learning over all seeds");
  add_globals(al);

  bool theory_csv = false;
  auto* theory = app.add_subcommand("theory", "print the maximum-accuracy table");
  add_globals(theory);
  theory->add_flag("--csv", theory_csv, "also write theory.csv to --out");

  std::string circuit = "vqc", metric = "sum";
  std::vector<double> xs;
  double t1 = 0.0, t2 = 0.0;
  bool route_csv = false;
  auto* route = app.add_subcommand("route", "plan one epoch's rotation schedule");
  add_globals(route);
  route->add_option("--circuit", circuit, "vqc|nevqc");
  route->add_option("--xs", xs, "data angles")->delimiter(',');
  route->add_option("--theta,--rho1", t1, "first rotation parameter");
  route->add_option("--rho2", t2, "second rotation parameter (NEVQC)");
  route->add_option("--metric", metric, "sum|max");
  route->add_flag("--csv", route_csv, "also write route.csv to --out");

  auto* reproduce = app.add_subcommand("reproduce", "run the 3 patterns x 3 strategies x {VQC, NEVQC} matrix");
  add_globals(reproduce);

  std::vector<std::uint64_t> shots;
  auto* compare = app.add_subcommand("compare", "sampled vs analytic errors");
  add_globals(compare);
  compare->add_option("--shots", shots, "shot counts to compare")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  for (auto* sub : app.get_subcommands())
    if (sub->count("--seed") > 0) g.seed = seed_value;

  try {
    if (gen->parsed()) return cmd_gen_data(g, pattern, pool_n, test_n, scheme);
    if (train->parsed()) return cmd_train(g, false);
    if (al->parsed()) return cmd_train(g, true);
    if (theory->parsed()) return cmd_theory(g, theory_csv);
    if (route->parsed()) return cmd_route(g, circuit, xs, t1, t2, metric, route_csv);
    if (reproduce->parsed()) return cmd_reproduce(g);
    if (compare->parsed()) return cmd_compare(g, shots);
  } catch (const alqc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
