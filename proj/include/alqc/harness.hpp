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

// Experiment runner: seeds fan out to workers, traces are aggregated on a
// common evaluation grid, and AL runs are compared with plain training by
// labelling and computation cost ratios.
//
// Seed splitting: run seed s_i = derive_seed(master, {i}) unless an explicit
// seed list is configured. Inside a run, the pool, initial parameters, AL
// seed set and shot noise use derive_seed(s_i, {stream}) with the stream
// indices of common.hpp, so runs sharing a seed share pool and init across
// strategies and classifiers.

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "alqc/active_learning.hpp"
#include "alqc/classifier.hpp"
#include "alqc/common.hpp"
#include "alqc/csv.hpp"
#include "alqc/datasets.hpp"
#include "alqc/svg.hpp"
#include "alqc/theory.hpp"

namespace alqc {

inline constexpr std::uint64_t kDefaultMasterSeed = 20230101;

inline std::vector<std::uint64_t> derive_run_seeds(std::uint64_t master, std::size_t n) {
  std::vector<std::uint64_t> s;
  for (std::size_t i = 0; i < n; ++i) s.push_back(derive_seed(master, {i}));
  return s;
}

struct ExperimentConfig {
  Circuit classifier = Circuit::vqc;
  int pattern = 1;
  Strategy strategy = Strategy::none;
  std::vector<std::uint64_t> seeds = derive_run_seeds(kDefaultMasterSeed, 4);
  Backend backend = Backend::analytic;
  std::uint64_t shots = 0;  // 0 selects 2000 (VQC) / 5500 (NEVQC)
  std::size_t pool_size = 20;
  std::size_t al_rounds = 10;
  std::size_t epochs_per_round = 10;
  std::size_t non_al_epochs = 35;
  std::size_t test_size = 500;
  std::size_t probe_interval = 5;
  std::size_t initial_size = 0;  // 0 selects 2 (USAMP) / 3 (QBC)
  std::size_t prototype_epochs = 10;
  bool warm_start = true;
  bool count_selection_evals = true;
  double learning_rate = 0.1;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  PoolScheme pool_scheme = PoolScheme::uniform_random;
  RouteMetric route_metric = RouteMetric::sum;
  double svc_c = 1.0;
  double svc_gamma = 0.0;  // 0 selects the "scale" default

  std::uint64_t resolved_shots() const { return shots > 0 ? shots : default_shots(classifier); }

  void validate() const {
    if (seeds.empty()) throw ConfigError("at least one seed is required");
    Pattern::builtin(pattern);
    if (pool_size < 2) throw ConfigError("pool_size must be >= 2");
    if (test_size < 1) throw ConfigError("test_size must be >= 1");
    if (probe_interval < 1) throw ConfigError("probe_interval must be >= 1");
    if (strategy != Strategy::none) {
      const std::size_t k0 = initial_size > 0 ? initial_size : (strategy == Strategy::qbc ? 3 : 2);
      if (k0 < 2) throw ConfigError("initial_size must be >= 2");
      if (pool_size < k0 + al_rounds) throw ConfigError("pool_size must be >= initial size + al_rounds");
    }
    train_config(seeds.front()).validate();
  }

  TrainConfig train_config(std::uint64_t seed) const {
    TrainConfig t;
    t.epochs = non_al_epochs;
    t.backend = backend;
    t.shots = resolved_shots();
    t.learning_rate = learning_rate;
    t.adam_beta1 = adam_beta1;
    t.adam_beta2 = adam_beta2;
    t.adam_eps = adam_eps;
    t.seed = seed;
    t.test_interval = probe_interval;
    t.route_metric = route_metric;
    return t;
  }

  AlConfig al_config(std::uint64_t seed) const {
    AlConfig a;
    a.strategy = strategy;
    a.train = train_config(seed);
    a.rounds = al_rounds;
    a.epochs_per_round = epochs_per_round;
    a.initial_size = initial_size;
    a.prototype_epochs = prototype_epochs;
    a.warm_start = warm_start;
    a.count_selection_evals = count_selection_evals;
    a.committee.svc_C = svc_c;
    a.committee.svc_gamma = svc_gamma;
    return a;
  }

  std::string label() const {
    return to_string(classifier) + "_p" + std::to_string(pattern) + "_" + to_string(strategy);
  }

  /// Flat `key = value` rendering; parse_config(echo()) reproduces the config.
  std::string echo() const {
    std::ostringstream o;
    o << "classifier = " << to_string(classifier) << '\n'
      << "pattern = " << pattern << '\n'
      << "strategy = " << to_string(strategy) << '\n'
      << "seeds = ";
    for (std::size_t i = 0; i < seeds.size(); ++i) o << (i ? "," : "") << seeds[i];
    o << '\n'
      << "backend = " << to_string(backend) << '\n'
      << "shots = " << resolved_shots() << '\n'
      << "pool_size = " << pool_size << '\n'
      << "al_rounds = " << al_rounds << '\n'
      << "epochs_per_round = " << epochs_per_round << '\n'
      << "non_al_epochs = " << non_al_epochs << '\n'
      << "test_size = " << test_size << '\n'
      << "probe_interval = " << probe_interval << '\n'
      << "initial_size = " << initial_size << '\n'
      << "prototype_epochs = " << prototype_epochs << '\n'
      << "warm_start = " << (warm_start ? "true" : "false") << '\n'
      << "count_selection_evals = " << (count_selection_evals ? "true" : "false") << '\n'
      << "learning_rate = " << csv::format(learning_rate) << '\n'
      << "adam_beta1 = " << csv::format(adam_beta1) << '\n'
      << "adam_beta2 = " << csv::format(adam_beta2) << '\n'
      << "adam_eps = " << csv::format(adam_eps) << '\n'
      << "pool_scheme = " << (pool_scheme == PoolScheme::uniform_random ? "uniform_random" : "evenly_spaced") << '\n'
      << "route_metric = " << to_string(route_metric) << '\n'
      << "svc_c = " << csv::format(svc_c) << '\n'
      << "svc_gamma = " << csv::format(svc_gamma) << '\n';
    return o.str();
  }
};

namespace detail {

inline bool parse_bool(const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("bad boolean '" + v + "'");
}

inline void apply_key(ExperimentConfig& c, const std::string& key, const std::string& v) {
  using csv::parse_double;
  using csv::parse_u64;
  if (key == "classifier") c.classifier = parse_circuit(v);
  else if (key == "pattern") c.pattern = static_cast<int>(parse_u64(v));
  else if (key == "strategy") c.strategy = parse_strategy(v);
  else if (key == "seeds") {
    c.seeds.clear();
    for (const auto& s : csv::split(v)) c.seeds.push_back(parse_u64(s));
  } else if (key == "backend") c.backend = parse_backend(v);
  else if (key == "shots") c.shots = parse_u64(v);
  else if (key == "pool_size") c.pool_size = parse_u64(v);
  else if (key == "al_rounds") c.al_rounds = parse_u64(v);
  else if (key == "epochs_per_round") c.epochs_per_round = parse_u64(v);
  else if (key == "non_al_epochs") c.non_al_epochs = parse_u64(v);
  else if (key == "test_size") c.test_size = parse_u64(v);
  else if (key == "probe_interval") c.probe_interval = parse_u64(v);
  else if (key == "initial_size") c.initial_size = parse_u64(v);
  else if (key == "prototype_epochs") c.prototype_epochs = parse_u64(v);
  else if (key == "warm_start") c.warm_start = parse_bool(v);
  else if (key == "count_selection_evals") c.count_selection_evals = parse_bool(v);
  else if (key == "learning_rate") c.learning_rate = parse_double(v);
  else if (key == "adam_beta1") c.adam_beta1 = parse_double(v);
  else if (key == "adam_beta2") c.adam_beta2 = parse_double(v);
  else if (key == "adam_eps") c.adam_eps = parse_double(v);
  else if (key == "pool_scheme") {
    if (v == "uniform_random") c.pool_scheme = PoolScheme::uniform_random;
    else if (v == "evenly_spaced") c.pool_scheme = PoolScheme::evenly_spaced;
    else throw ConfigError("unknown pool_scheme '" + v + "'");
  } else if (key == "route_metric") c.route_metric = parse_route_metric(v);
  else if (key == "svc_c") c.svc_c = parse_double(v);
  else if (key == "svc_gamma") c.svc_gamma = parse_double(v);
  else throw ConfigError("unknown config key '" + key + "'");
}

}  // namespace detail

/// Parses flat UTF-8 `key = value` lines on top of `base`. '#' starts a
/// comment; unknown keys are errors.
inline ExperimentConfig parse_config(const std::string& text, ExperimentConfig base = {}) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string_view t = csv::trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string_view::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key(csv::trim(t.substr(0, eq)));
    const std::string val(csv::trim(t.substr(eq + 1)));
    try {
      detail::apply_key(base, key, val);
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return base;
}

inline ExperimentConfig load_config(const std::string& path, ExperimentConfig base = {}) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config(ss.str(), std::move(base));
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Runs

struct RunResult {
  std::uint64_t seed = 0;
  ModelParams params;
  RunTrace trace;
  std::vector<SelectionRound> rounds;
  EvalCounter counter;
};

/// One seeded run of `cfg` (plain training when strategy is none).
inline RunResult run_single(const ExperimentConfig& cfg, std::uint64_t seed) {
  const Pattern pattern = Pattern::builtin(cfg.pattern);
  const auto pool = generate_pool(pattern, cfg.pool_size, derive_seed(seed, {stream::pool}), cfg.pool_scheme);
  const ModelParams p0 = initial_params(cfg.classifier, derive_seed(seed, {stream::init}));
  auto grid = generate_test_grid(pattern, cfg.test_size);
  RunResult r;
  r.seed = seed;
  if (cfg.strategy == Strategy::none) {
    const auto data = label_all(pattern, pool);
    TrainResult t = train(p0, data, cfg.train_config(seed), std::move(grid));
    r.params = t.params;
    r.trace = std::move(t.trace);
    r.counter = t.counter;
  } else {
    AlResult a = al_train(pattern, pool, p0, cfg.al_config(seed), std::move(grid));
    r.params = a.params;
    r.trace = std::move(a.trace);
    r.rounds = std::move(a.rounds);
    r.counter = a.counter;
  }
  return r;
}

/// Runs `n` independent tasks on up to `jobs` worker threads. Each task owns
/// its state; results land in their own slot.
inline void parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& task) {
  jobs = std::max<std::size_t>(1, std::min(jobs, n));
  if (jobs == 1) {
    for (std::size_t i = 0; i < n; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  std::vector<std::thread> workers;
  for (std::size_t w = 0; w < jobs; ++w) {
    workers.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < n;) {
        try {
          task(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mu);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : workers) t.join();
  if (error) std::rethrow_exception(error);
}

struct CurvePoint {
  std::uint64_t evaluations = 0;
  std::size_t labeled_size = 0;
  double mean_accuracy = 0.0;
  double std_accuracy = 0.0;
  std::size_t n_runs = 0;
};

struct SuiteResult {
  ExperimentConfig config;
  std::vector<RunResult> runs;
  std::vector<CurvePoint> curve;
};

/// Mean/std accuracy over runs on the union of probe evaluation counts,
/// each run step-interpolated (last probe carried forward).
inline std::vector<CurvePoint> aggregate_curves(const std::vector<RunResult>& runs) {
  std::vector<std::vector<RunTrace::Probe>> probes;
  std::vector<std::uint64_t> grid;
  for (const auto& r : runs) {
    probes.push_back(r.trace.probes());
    if (probes.back().empty()) throw std::runtime_error("aggregate_curves: run without probes");
    for (const auto& p : probes.back()) grid.push_back(p.evaluations);
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  std::vector<CurvePoint> curve;
  for (std::uint64_t g : grid) {
    CurvePoint c;
    c.evaluations = g;
    c.n_runs = runs.size();
    std::vector<double> vals;
    for (const auto& pr : probes) {
      // Last probe with evaluations <= g; the first probe before that.
      auto it = std::upper_bound(pr.begin(), pr.end(), g,
                                 [](std::uint64_t v, const RunTrace::Probe& p) { return v < p.evaluations; });
      const RunTrace::Probe& p = it == pr.begin() ? pr.front() : *std::prev(it);
      vals.push_back(p.accuracy);
      c.labeled_size = std::max(c.labeled_size, p.labeled_size);
    }
    double s = 0.0;
    for (double v : vals) s += v;
    c.mean_accuracy = s / static_cast<double>(vals.size());
    double ss = 0.0;
    for (double v : vals) ss += (v - c.mean_accuracy) * (v - c.mean_accuracy);
    c.std_accuracy = std::sqrt(ss / static_cast<double>(vals.size()));
    curve.push_back(c);
  }
  return curve;
}

/// Runs every (config, seed) pair of `cfgs` on the worker pool. Output order
/// follows the input order regardless of `jobs`.
inline std::vector<SuiteResult> run_suites(const std::vector<ExperimentConfig>& cfgs, std::size_t jobs = 1) {
  std::vector<std::pair<std::size_t, std::size_t>> tasks;
  std::vector<SuiteResult> out(cfgs.size());
  for (std::size_t c = 0; c < cfgs.size(); ++c) {
    cfgs[c].validate();
    out[c].config = cfgs[c];
    out[c].runs.resize(cfgs[c].seeds.size());
    for (std::size_t i = 0; i < cfgs[c].seeds.size(); ++i) tasks.emplace_back(c, i);
  }
  parallel_for(tasks.size(), jobs, [&](std::size_t t) {
    const auto [c, i] = tasks[t];
    out[c].runs[i] = run_single(cfgs[c], cfgs[c].seeds[i]);
  });
  for (auto& s : out) s.curve = aggregate_curves(s.runs);
  return out;
}

inline SuiteResult run_suite(const ExperimentConfig& cfg, std::size_t jobs = 1) {
  return std::move(run_suites({cfg}, jobs).front());
}

// ---------------------------------------------------------------------------
// Cost ratios

struct CostRatioRow {
  double labeling_ratio = std::numeric_limits<double>::quiet_NaN();
  double computation_ratio = std::numeric_limits<double>::quiet_NaN();
  bool matched = false;
  double target_accuracy = 0.0;        // non-AL mean accuracy at its final probe
  std::uint64_t match_evaluations = 0;  // AL evaluations at the match point
  std::size_t match_labels = 0;
  std::uint64_t non_al_evaluations = 0;
  std::size_t non_al_labels = 0;
};

/// Match point: first AL grid point whose mean accuracy reaches the non-AL
/// converged mean accuracy. The untrained start point (no evaluations spent)
/// cannot match, so ratios stay positive.
inline CostRatioRow cost_ratios(const SuiteResult& al, const SuiteResult& non_al) {
  if (al.curve.empty() || non_al.curve.empty()) throw std::invalid_argument("cost_ratios: empty curve");
  CostRatioRow row;
  const CurvePoint& conv = non_al.curve.back();
  row.target_accuracy = conv.mean_accuracy;
  row.non_al_evaluations = conv.evaluations;
  row.non_al_labels = non_al.config.pool_size;
  for (const CurvePoint& c : al.curve) {
    if (c.evaluations == 0) continue;
    if (c.mean_accuracy >= row.target_accuracy - 1e-12) {
      row.matched = true;
      row.match_evaluations = c.evaluations;
      row.match_labels = c.labeled_size;
      row.computation_ratio = static_cast<double>(c.evaluations) / static_cast<double>(conv.evaluations);
      row.labeling_ratio = static_cast<double>(c.labeled_size) / static_cast<double>(row.non_al_labels);
      break;
    }
  }
  return row;
}

// ---------------------------------------------------------------------------
// Sampled vs analytic

struct ErrorReport {
  double loss_error = 0.0;
  double accuracy_error = 0.0;
  std::size_t loss_points = 0;
  std::size_t accuracy_points = 0;
};

/// Mean absolute difference of the loss series and of the probe accuracy
/// series of two runs of the same config that differ only in backend.
inline ErrorReport compare_to_analytic(const RunTrace& sampled, const RunTrace& analytic) {
  const auto ls = sampled.losses(), la = analytic.losses();
  const auto as = sampled.accuracies(), aa = analytic.accuracies();
  if (ls.size() != la.size() || as.size() != aa.size())
    throw std::invalid_argument("compare_to_analytic: traces have different lengths");
  ErrorReport r;
  r.loss_points = ls.size();
  r.accuracy_points = as.size();
  if (!ls.empty()) r.loss_error = mean_abs_error(ls, la);
  if (!as.empty()) r.accuracy_error = mean_abs_error(as, aa);
  return r;
}

// ---------------------------------------------------------------------------
// Output

inline std::string curves_to_csv(const std::vector<SuiteResult>& suites) {
  std::string s = "suite,evaluations,labeled_size,mean_accuracy,std_accuracy,n_runs\n";
  for (const auto& suite : suites)
    for (const CurvePoint& c : suite.curve)
      s += suite.config.label() + ',' + std::to_string(c.evaluations) + ',' + std::to_string(c.labeled_size) + ',' +
           csv::format(c.mean_accuracy) + ',' + csv::format(c.std_accuracy) + ',' + std::to_string(c.n_runs) + '\n';
  return s;
}

struct RatioEntry {
  std::string al_suite;
  std::string non_al_suite;
  CostRatioRow row;
};

inline std::string ratios_to_csv(const std::vector<RatioEntry>& ratios) {
  auto opt = [](bool ok, double v) { return ok ? csv::format(v) : std::string("NA"); };
  std::string s =
      "al_suite,non_al_suite,labeling_ratio,computation_ratio,matched,target_accuracy,match_evaluations,match_labels,"
      "non_al_evaluations\n";
  for (const auto& r : ratios)
    s += r.al_suite + ',' + r.non_al_suite + ',' + opt(r.row.matched, r.row.labeling_ratio) + ',' +
         opt(r.row.matched, r.row.computation_ratio) + ',' + (r.row.matched ? "true" : "false") + ',' +
         csv::format(r.row.target_accuracy) + ',' + (r.row.matched ? std::to_string(r.row.match_evaluations) : "NA") +
         ',' + (r.row.matched ? std::to_string(r.row.match_labels) : "NA") + ',' +
         std::to_string(r.row.non_al_evaluations) + '\n';
  return s;
}

inline std::string curves_to_svg(const std::vector<SuiteResult>& suites, const std::string& title) {
  std::vector<svg::Series> series;
  for (const auto& suite : suites) {
    svg::Series s;
    s.name = suite.config.label();
    for (const CurvePoint& c : suite.curve) {
      s.x.push_back(static_cast<double>(c.evaluations));
      s.y.push_back(c.mean_accuracy);
      s.band.push_back(c.std_accuracy);
    }
    series.push_back(std::move(s));
  }
  return svg::line_chart(series, title, "expectation evaluations", "test accuracy");
}

/// Writes trace_<run>.csv (and selections_<run>.csv for AL runs),
/// aggregate.csv, ratios.csv, curves.svg and config.echo into out_dir.
inline void emit_outputs(const std::vector<SuiteResult>& suites, const std::vector<RatioEntry>& ratios,
                         const std::string& out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory '" + out_dir + "': " + ec.message());
  auto path = [&](const std::string& name) { return (fs::path(out_dir) / name).string(); };

  std::string echo = "# alqc " + std::string(kVersion) + "\n";
  echo += "# costs in rotation-parameter radians (physical plate travel is half)\n";
  for (const auto& suite : suites) {
    echo += "[" + suite.config.label() + "]\n" + suite.config.echo();
    for (std::size_t i = 0; i < suite.runs.size(); ++i) {
      const std::string run = suite.config.label() + "_s" + std::to_string(i);
      csv::write_file(path("trace_" + run + ".csv"), suite.runs[i].trace.to_csv());
      if (!suite.runs[i].rounds.empty())
        csv::write_file(path("selections_" + run + ".csv"), selections_to_csv(suite.runs[i].rounds));
    }
  }
  csv::write_file(path("aggregate.csv"), curves_to_csv(suites));
  csv::write_file(path("ratios.csv"), ratios_to_csv(ratios));
  csv::write_file(path("curves.svg"), curves_to_svg(suites, "test accuracy vs. expectation evaluations"));
  csv::write_file(path("config.echo"), echo);
}

}  // namespace alqc
