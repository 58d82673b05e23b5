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

#include "alqc/harness.hpp"

#include <gtest/gtest.h>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

using namespace alqc;

namespace {

ExperimentConfig small(Circuit c, int pattern, Strategy s) {
  ExperimentConfig cfg;
  cfg.classifier = c;
  cfg.pattern = pattern;
  cfg.strategy = s;
  cfg.seeds = {1, 2};
  cfg.test_size = 200;
  return cfg;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

SuiteResult fake_suite(std::vector<std::vector<RunTrace::Probe>> runs, std::size_t pool = 20) {
  SuiteResult s;
  s.config.pool_size = pool;
  for (const auto& probes : runs) {
    RunResult r;
    for (const auto& p : probes) {
      TraceRow row;
      row.evaluations = p.evaluations;
      row.labeled_size = p.labeled_size;
      row.test_accuracy = p.accuracy;
      r.trace.rows.push_back(row);
    }
    s.runs.push_back(r);
  }
  s.curve = aggregate_curves(s.runs);
  return s;
}

}  // namespace

TEST(Config, echo_round_trip) {
  ExperimentConfig c = small(Circuit::nevqc, 3, Strategy::qbc);
  c.backend = Backend::sampled;
  c.learning_rate = 0.05;
  c.warm_start = false;
  c.pool_scheme = PoolScheme::evenly_spaced;
  c.route_metric = RouteMetric::max;
  const ExperimentConfig back = parse_config(c.echo());
  EXPECT_EQ(back.echo(), c.echo());
  EXPECT_EQ(back.label(), "NEVQC_p3_qbc");
  EXPECT_EQ(back.resolved_shots(), 5500u);
  EXPECT_EQ(ExperimentConfig{}.resolved_shots(), 2000u);
}

TEST(Config, parse_rules) {
  const auto c = parse_config("# comment\n\n classifier = NEVQC_STAR \npattern=2 # trailing\nseeds = 4, 5,6\n");
  EXPECT_EQ(c.classifier, Circuit::nevqc_star);
  EXPECT_EQ(c.pattern, 2);
  EXPECT_EQ(c.seeds, (std::vector<std::uint64_t>{4, 5, 6}));
  EXPECT_THROW(parse_config("colour = red\n"), ConfigError);
  EXPECT_THROW(parse_config("pattern\n"), ConfigError);
  EXPECT_THROW(parse_config("shots = -3\n"), ConfigError);
  EXPECT_THROW(parse_config("warm_start = maybe\n"), ConfigError);
  EXPECT_THROW(parse_config("backend = gpu\n"), ConfigError);
  try {
    parse_config("pattern = 1\nfoo = 2\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
  EXPECT_THROW(load_config("/nonexistent/alqc.cfg"), ConfigError);
}

TEST(Config, validation) {
  ExperimentConfig c;
  c.pattern = 7;
  EXPECT_THROW(c.validate(), ConfigError);
  c = ExperimentConfig{};
  c.seeds.clear();
  EXPECT_THROW(c.validate(), ConfigError);
  c = ExperimentConfig{};
  c.strategy = Strategy::usamp;
  c.al_rounds = 19;
  EXPECT_THROW(c.validate(), ConfigError);
  c.al_rounds = 18;
  EXPECT_NO_THROW(c.validate());
}

TEST(Seeds, derived_and_distinct) {
  const auto s = derive_run_seeds(kDefaultMasterSeed, 8);
  EXPECT_EQ(s, derive_run_seeds(kDefaultMasterSeed, 8));
  EXPECT_EQ(std::set<std::uint64_t>(s.begin(), s.end()).size(), 8u);
  EXPECT_EQ(s[3], derive_seed(kDefaultMasterSeed, {3}));
}

TEST(Suite, deterministic_across_job_counts) {
  std::vector<ExperimentConfig> cfgs{small(Circuit::vqc, 2, Strategy::usamp), small(Circuit::nevqc, 1, Strategy::none),
                                     small(Circuit::vqc, 3, Strategy::qbc)};
  cfgs[0].backend = Backend::sampled;
  const auto a = run_suites(cfgs, 1);
  const auto b = run_suites(cfgs, 4);
  const auto c = run_suites(cfgs, 4);
  EXPECT_EQ(curves_to_csv(a), curves_to_csv(b));
  EXPECT_EQ(curves_to_csv(b), curves_to_csv(c));
  for (std::size_t s = 0; s < a.size(); ++s)
    for (std::size_t i = 0; i < a[s].runs.size(); ++i) {
      EXPECT_EQ(a[s].runs[i].trace.to_csv(), b[s].runs[i].trace.to_csv());
      EXPECT_EQ(selections_to_csv(a[s].runs[i].rounds), selections_to_csv(b[s].runs[i].rounds));
    }
}

TEST(Suite, star_variant_matches_without_interference) {
  for (int pattern = 1; pattern <= 3; ++pattern) {
    const auto a = run_single(small(Circuit::nevqc, pattern, Strategy::usamp), 9);
    const auto b = run_single(small(Circuit::nevqc_star, pattern, Strategy::usamp), 9);
    ASSERT_EQ(a.trace.rows.size(), b.trace.rows.size());
    for (std::size_t i = 0; i < a.trace.rows.size(); ++i) {
      const auto &x = a.trace.rows[i], &y = b.trace.rows[i];
      ASSERT_EQ(x.evaluations, y.evaluations);
      ASSERT_EQ(x.loss.has_value(), y.loss.has_value());
      if (x.loss) {
        ASSERT_NEAR(*x.loss, *y.loss, 1e-12);
      }
      if (x.test_accuracy) {
        ASSERT_NEAR(*x.test_accuracy, *y.test_accuracy, 1e-12);
      }
    }
  }
}

TEST(Suite, evaluation_accounting_and_label_limits) {
  const auto plain = run_single(small(Circuit::vqc, 1, Strategy::none), 3);
  EXPECT_EQ(plain.counter.evaluations, 35u * 2 * 20);
  const auto nev = run_single(small(Circuit::nevqc, 1, Strategy::none), 3);
  EXPECT_EQ(nev.counter.evaluations, 35u * 5 * 20);
  for (const auto& row : plain.trace.rows) EXPECT_EQ(row.labeled_size, 20u);
  const auto al = run_single(small(Circuit::vqc, 2, Strategy::usamp), 3);
  std::size_t max_labels = 0;
  for (const auto& row : al.trace.rows) max_labels = std::max(max_labels, row.labeled_size);
  EXPECT_EQ(max_labels, 12u);
  EXPECT_EQ(al.trace.rows.back().evaluations, al.counter.evaluations);
}

TEST(Aggregate, union_grid_and_carry_forward) {
  const SuiteResult s = fake_suite({{{0, 0.5, 2}, {10, 0.7, 3}, {30, 0.9, 4}}, {{0, 0.3, 2}, {20, 0.5, 3}}});
  ASSERT_EQ(s.curve.size(), 4u);
  const std::uint64_t grid[] = {0, 10, 20, 30};
  const double mean[] = {0.4, 0.5, 0.6, 0.7};
  const double sd[] = {0.1, 0.2, 0.1, 0.2};
  for (int i = 0; i < 4; ++i) {
    EXPECT_EQ(s.curve[i].evaluations, grid[i]);
    EXPECT_NEAR(s.curve[i].mean_accuracy, mean[i], 1e-12);
    EXPECT_NEAR(s.curve[i].std_accuracy, sd[i], 1e-12);
    EXPECT_EQ(s.curve[i].n_runs, 2u);
  }
  EXPECT_EQ(s.curve.back().labeled_size, 4u);

  const auto real = run_suite(small(Circuit::vqc, 2, Strategy::usamp));
  std::set<std::uint64_t> g;
  for (const auto& r : real.runs)
    for (const auto& p : r.trace.probes()) g.insert(p.evaluations);
  EXPECT_EQ(real.curve.size(), g.size());
}

TEST(CostRatios, examples) {
  const SuiteResult non_al = fake_suite({{{0, 0.5, 20}, {1000, 0.9, 20}}});
  const SuiteResult al = fake_suite({{{0, 0.5, 2}, {100, 0.8, 3}, {300, 0.9, 5}, {500, 0.95, 6}}});
  const CostRatioRow r = cost_ratios(al, non_al);
  ASSERT_TRUE(r.matched);
  EXPECT_EQ(r.match_evaluations, 300u);
  EXPECT_EQ(r.match_labels, 5u);
  EXPECT_DOUBLE_EQ(r.computation_ratio, 0.3);
  EXPECT_DOUBLE_EQ(r.labeling_ratio, 0.25);
  EXPECT_DOUBLE_EQ(r.target_accuracy, 0.9);

  // Identical curves match at the first point reaching the target.
  const CostRatioRow same = cost_ratios(non_al, non_al);
  EXPECT_DOUBLE_EQ(same.computation_ratio, 1.0);
  EXPECT_DOUBLE_EQ(same.labeling_ratio, 1.0);

  // A lucky untrained start does not count as a match.
  const SuiteResult lucky = fake_suite({{{0, 0.95, 2}, {40, 0.85, 2}, {80, 0.91, 3}}});
  const CostRatioRow l = cost_ratios(lucky, non_al);
  EXPECT_EQ(l.match_evaluations, 80u);
  EXPECT_DOUBLE_EQ(l.computation_ratio, 0.08);

  const SuiteResult weak = fake_suite({{{0, 0.5, 2}, {100, 0.6, 3}}});
  const CostRatioRow u = cost_ratios(weak, non_al);
  EXPECT_FALSE(u.matched);
  EXPECT_TRUE(std::isnan(u.computation_ratio));
  const std::string csv = ratios_to_csv({{"a", "b", u}});
  EXPECT_NE(csv.find("a,b,NA,NA,false"), std::string::npos);
}

TEST(Compare, errors_against_self_and_mismatch) {
  ExperimentConfig c = small(Circuit::vqc, 1, Strategy::none);
  const auto a = run_single(c, 5);
  const ErrorReport self = compare_to_analytic(a.trace, a.trace);
  EXPECT_EQ(self.loss_error, 0.0);
  EXPECT_EQ(self.accuracy_error, 0.0);
  EXPECT_EQ(self.loss_points, 35u);
  c.non_al_epochs = 10;
  const auto shorter = run_single(c, 5);
  EXPECT_THROW(compare_to_analytic(a.trace, shorter.trace), std::invalid_argument);
  c.non_al_epochs = 35;
  c.backend = Backend::sampled;
  const auto s = run_single(c, 5);
  const ErrorReport e = compare_to_analytic(s.trace, a.trace);
  EXPECT_GT(e.loss_error, 0.0);
  // Losses are sums over 20 items.
  EXPECT_LT(e.loss_error, 0.5);
  EXPECT_LT(e.accuracy_error, 0.03);
}

TEST(Output, files_and_formats) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "alqc_harness_test";
  fs::remove_all(dir);
  const auto suites = run_suites({small(Circuit::vqc, 2, Strategy::usamp), small(Circuit::vqc, 2, Strategy::none)});
  const std::vector<RatioEntry> ratios{{suites[0].config.label(), suites[1].config.label(),
                                        cost_ratios(suites[0], suites[1])}};
  emit_outputs(suites, ratios, dir.string());
  for (const char* f : {"aggregate.csv", "ratios.csv", "curves.svg", "config.echo", "trace_VQC_p2_usamp_s0.csv",
                        "trace_VQC_p2_usamp_s1.csv", "selections_VQC_p2_usamp_s0.csv", "trace_VQC_p2_none_s1.csv"})
    EXPECT_TRUE(fs::exists(dir / f)) << f;
  EXPECT_FALSE(fs::exists(dir / "selections_VQC_p2_none_s0.csv"));

  const csv::Table agg = csv::read_file((dir / "aggregate.csv").string());
  EXPECT_EQ(agg.rows.size(), suites[0].curve.size() + suites[1].curve.size());
  for (const auto& row : agg.rows) {
    const double m = csv::parse_double(row[agg.column("mean_accuracy")]);
    EXPECT_GE(m, 0.0);
    EXPECT_LE(m, 1.0);
  }
  const RunTrace back = RunTrace::from_csv(slurp(dir / "trace_VQC_p2_usamp_s0.csv"));
  EXPECT_EQ(back.to_csv(), suites[0].runs[0].trace.to_csv());
  EXPECT_EQ(csv::read_file((dir / "ratios.csv").string()).rows.size(), 1u);

  boost::property_tree::ptree tree;
  std::istringstream svg(slurp(dir / "curves.svg"));
  EXPECT_NO_THROW(boost::property_tree::read_xml(svg, tree));
  EXPECT_EQ(tree.count("svg"), 1u);

  const std::string echo = slurp(dir / "config.echo");
  EXPECT_NE(echo.find("radians"), std::string::npos);
  EXPECT_NE(echo.find("[VQC_p2_usamp]"), std::string::npos);
  fs::remove_all(dir);
}

TEST(ParallelFor, rethrows_and_covers_all) {
  std::vector<int> hit(100, 0);
  parallel_for(100, 8, [&](std::size_t i) { hit[i] += 1; });
  for (int h : hit) EXPECT_EQ(h, 1);
  EXPECT_THROW(parallel_for(10, 3,
                            [](std::size_t i) {
                              if (i == 7) throw std::runtime_error("x");
                            }),
               std::runtime_error);
}
