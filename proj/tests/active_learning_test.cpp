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

#include "alqc/active_learning.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

using namespace alqc;

namespace {

ExpectationEstimator exact() { return {Backend::analytic, 1, 0}; }

std::vector<DataPoint> unlabeled(std::initializer_list<double> xs) {
  std::vector<DataPoint> v;
  for (double x : xs) v.push_back({x, std::nullopt});
  return v;
}

}  // namespace

TEST(Usamp, score_examples) {
  EXPECT_DOUBLE_EQ(usamp_score_from_expectation(0.0), -0.5);
  EXPECT_DOUBLE_EQ(usamp_score_from_expectation(1.0), -1.0);
  EXPECT_DOUBLE_EQ(usamp_score_from_expectation(-1.0), -1.0);
  EXPECT_DOUBLE_EQ(usamp_score_from_expectation(0.5), -0.75);
}

TEST(Usamp, argmax_is_argmin_abs_expectation) {
  std::mt19937_64 r(4);
  std::uniform_real_distribution<double> u(0, kPi);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<DataPoint> pool;
    for (int i = 0; i < 1 + trial % 19; ++i) pool.push_back({u(r), std::nullopt});
    const ModelParams p = trial % 2 ? ModelParams::vqc(u(r)) : ModelParams::nevqc(u(r), u(r));
    auto est = exact();
    EvalCounter c;
    const Selection s = select_usamp(p, pool, est, c);
    EXPECT_EQ(c.evaluations, pool.size());
    std::size_t best = 0;
    for (std::size_t i = 1; i < pool.size(); ++i)
      if (std::abs(analytic_expectation(p, pool[i].x)) < std::abs(analytic_expectation(p, pool[best].x))) best = i;
    ASSERT_EQ(s.index, best);
  }
}

TEST(Usamp, examples) {
  auto est = exact();
  EvalCounter c;
  EXPECT_EQ(select_usamp(ModelParams::vqc(1.0), unlabeled({2.0}), est, c).index, 0u);
  const auto pool = unlabeled({kPi / 4 + 0.01, kPi / 2});
  EXPECT_EQ(select_usamp(ModelParams::vqc(kPi / 2), pool, est, c).index, 0u);
  // Equal scores go to the smaller index.
  EXPECT_EQ(select_usamp(ModelParams::vqc(kPi / 2), unlabeled({0.3, kPi - 0.3}), est, c).index, 0u);
  EXPECT_THROW(select_usamp(ModelParams::vqc(0), std::vector<DataPoint>{}, est, c), std::invalid_argument);
}

TEST(Qbc, vote_entropy_examples) {
  using L = Label;
  const std::vector<L> u{L::plus, L::plus, L::plus, L::plus};
  const std::vector<L> s{L::plus, L::minus, L::plus, L::minus};
  const std::vector<L> t{L::plus, L::plus, L::minus, L::plus};
  EXPECT_NEAR(qbc_vote_entropy(u), 0.0, 1e-15);
  EXPECT_NEAR(qbc_vote_entropy(s), std::log(2.0), 1e-15);
  EXPECT_NEAR(qbc_vote_entropy(t), 0.56234, 1e-5);
  EXPECT_NEAR(qbc_vote_entropy(t), -(0.75 * std::log(0.75) + 0.25 * std::log(0.25)), 1e-15);
  EXPECT_THROW(qbc_vote_entropy(std::vector<L>{}), std::invalid_argument);
}

TEST(Qbc, unanimous_committee_picks_first) {
  // Well separated training data: all members agree on far-away queries.
  const Pattern p = Pattern::builtin(1);
  std::vector<DataPoint> train;
  for (double x : {0.05, 0.1, 0.15, 1.5, 1.55, 1.6, 3.0, 3.05}) train.push_back(labelled(p, x));
  const Committee c = fit_committee(train);
  const auto pool = unlabeled({1.56, 1.52, 0.08});
  const Selection s = select_qbc(c, pool);
  EXPECT_EQ(s.index, 0u);
  EXPECT_EQ(s.score, 0.0);
}

TEST(AlTrain, usamp_run_invariants) {
  const Pattern p = Pattern::builtin(2);
  const auto pool = generate_pool(p, 20, 31);
  AlConfig cfg;
  cfg.train.seed = 77;
  const ModelParams p0 = initial_params(Circuit::vqc, 1);
  const AlResult r = al_train(p, pool, p0, cfg, generate_test_grid(p));
  ASSERT_EQ(r.rounds.size(), 10u);
  EXPECT_EQ(r.labeled.size(), 12u);
  std::set<double> chosen;
  std::set<double> seed_set;
  for (std::size_t i = 0; i < 2; ++i) seed_set.insert(r.labeled[i].x);
  std::size_t prev_pool = 18;
  for (const SelectionRound& s : r.rounds) {
    EXPECT_TRUE(chosen.insert(s.chosen_x).second);
    EXPECT_FALSE(seed_set.count(s.chosen_x));
    EXPECT_EQ(s.pool_at_selection.size(), prev_pool);
    prev_pool = s.pool_at_selection.size() - 1;
    // Chosen item hugs the decision boundary.
    double m = 2;
    for (double x : s.pool_at_selection) m = std::min(m, std::abs(analytic_expectation(s.params_at_selection, x)));
    EXPECT_EQ(std::abs(analytic_expectation(s.params_at_selection, s.chosen_x)), m);
    EXPECT_DOUBLE_EQ(s.score, usamp_score_from_expectation(analytic_expectation(s.params_at_selection, s.chosen_x)));
  }
  for (const DataPoint& d : r.labeled) EXPECT_EQ(d.label, pattern_label(p, d.x));

  // Closed-form evaluation accounting: prototype training, then per round
  // the pool scan plus epochs_per_round * 2 * |labeled|.
  std::uint64_t expected = cfg.prototype_epochs * 2 * 2;
  for (std::size_t k = 0; k < 10; ++k) expected += (20 - 2 - k) + cfg.epochs_per_round * 2 * (3 + k);
  EXPECT_EQ(r.counter.evaluations, expected);
  EXPECT_EQ(r.rounds.back().evaluations_spent, expected);
  // Probe at start, after the prototype and after each round.
  EXPECT_EQ(r.trace.probes().size(), 12u);
}

TEST(AlTrain, qbc_consumes_no_selection_evaluations) {
  const Pattern p = Pattern::builtin(3);
  const auto pool = generate_pool(p, 20, 5);
  AlConfig cfg;
  cfg.strategy = Strategy::qbc;
  cfg.train.seed = 3;
  const AlResult r = al_train(p, pool, initial_params(Circuit::nevqc, 2), cfg, generate_test_grid(p));
  EXPECT_EQ(r.labeled.size(), 13u);
  std::uint64_t expected = cfg.prototype_epochs * 5 * 3;
  for (std::size_t k = 0; k < 10; ++k) expected += cfg.epochs_per_round * 5 * (4 + k);
  EXPECT_EQ(r.counter.evaluations, expected);
}

TEST(AlTrain, toggles_and_errors) {
  const Pattern p = Pattern::builtin(1);
  const auto pool = generate_pool(p, 20, 8);
  AlConfig cfg;
  cfg.count_selection_evals = false;
  const AlResult r = al_train(p, pool, ModelParams::vqc(0.3), cfg, generate_test_grid(p));
  std::uint64_t expected = cfg.prototype_epochs * 2 * 2;
  for (std::size_t k = 0; k < 10; ++k) expected += cfg.epochs_per_round * 2 * (3 + k);
  EXPECT_EQ(r.counter.evaluations, expected);

  AlConfig cold;
  cold.warm_start = false;
  EXPECT_NO_THROW(al_train(p, pool, ModelParams::vqc(0.3), cold, generate_test_grid(p)));

  AlConfig big;
  big.rounds = 19;
  EXPECT_THROW(al_train(p, pool, ModelParams::vqc(0.3), big, generate_test_grid(p)), std::invalid_argument);
  AlConfig none;
  none.strategy = Strategy::none;
  EXPECT_THROW(al_train(p, pool, ModelParams::vqc(0.3), none, generate_test_grid(p)), std::invalid_argument);
}

TEST(AlTrain, seed_set_has_both_labels) {
  for (int id = 1; id <= 3; ++id) {
    const Pattern p = Pattern::builtin(id);
    for (std::uint64_t s = 0; s < 50; ++s) {
      const auto pool = generate_pool(p, 20, s);
      for (std::size_t k : {2u, 3u}) {
        const auto idx = seed_labeled_indices(p, pool, k, s);
        ASSERT_EQ(idx.size(), k);
        std::vector<DataPoint> pts;
        for (auto i : idx) pts.push_back(pool[i]);
        ASSERT_TRUE(has_both_labels(p, pts));
        ASSERT_EQ(std::set<std::size_t>(idx.begin(), idx.end()).size(), k);
      }
    }
  }
}

TEST(AlTrain, deterministic_with_sampled_backend) {
  const Pattern p = Pattern::builtin(2);
  const auto pool = generate_pool(p, 20, 12);
  AlConfig cfg;
  cfg.train.backend = Backend::sampled;
  cfg.train.seed = 12;
  const auto a = al_train(p, pool, ModelParams::vqc(1.0), cfg, generate_test_grid(p));
  const auto b = al_train(p, pool, ModelParams::vqc(1.0), cfg, generate_test_grid(p));
  EXPECT_EQ(a.trace.to_csv(), b.trace.to_csv());
  EXPECT_EQ(selections_to_csv(a.rounds), selections_to_csv(b.rounds));
  const std::string text = selections_to_csv(a.rounds);
  EXPECT_EQ(text.substr(0, text.find('\n')), "round,chosen_x,score,labeled_size,evaluations");
}

TEST(Strategy, parse) {
  EXPECT_EQ(parse_strategy("usamp"), Strategy::usamp);
  EXPECT_EQ(parse_strategy("QBC"), Strategy::qbc);
  EXPECT_EQ(parse_strategy("none"), Strategy::none);
  EXPECT_THROW(parse_strategy("random"), ConfigError);
}
