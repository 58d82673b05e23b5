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

#include "alqc/datasets.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace alqc;

TEST(Pattern, builtin_margins) {
  const double expected[] = {kPi / 2, kPi / 4, std::atan(0.25)};
  for (int id = 1; id <= 3; ++id) {
    const Pattern p = Pattern::builtin(id);
    EXPECT_NEAR(p.beta_max - p.beta_min, expected[id - 1], 1e-15);
    EXPECT_GE(p.beta_min, 0.0);
    EXPECT_LT(p.beta_max, kPi);
    EXPECT_NEAR(p.beta_min + p.beta_max, kPi, 1e-15);
  }
  EXPECT_THROW(Pattern::builtin(4), ConfigError);
}

TEST(Pattern, label_examples) {
  const Pattern p1 = Pattern::builtin(1);
  EXPECT_EQ(pattern_label(p1, kPi / 2), Label::plus);
  EXPECT_EQ(pattern_label(p1, 0.0), Label::minus);
  EXPECT_EQ(pattern_label(p1, kPi / 4), Label::plus);
  EXPECT_EQ(pattern_label(p1, 3 * kPi / 4), Label::minus);
  // pi-periodic.
  for (double x : {0.1, 0.9, 1.7, 2.9}) {
    EXPECT_EQ(pattern_label(p1, x), pattern_label(p1, x + kPi));
    EXPECT_EQ(pattern_label(p1, x), pattern_label(p1, x - 3 * kPi));
  }
}

TEST(Pattern, plus_fraction_on_dense_grid) {
  for (int id = 1; id <= 3; ++id) {
    const Pattern p = Pattern::builtin(id);
    const int n = 100000;
    int plus = 0;
    for (int j = 0; j < n; ++j) plus += pattern_label(p, (j + 0.5) * kPi / n) == Label::plus;
    EXPECT_NEAR(static_cast<double>(plus) / n, p.delta_beta / kPi, 1e-4);
  }
  const Pattern p3 = Pattern::builtin(3);
  int plus = 0;
  for (int j = 0; j < 100000; ++j) plus += pattern_label(p3, (j + 0.5) * kPi / 100000) == Label::plus;
  EXPECT_NEAR(plus / 100000.0, 0.07797, 1e-4);
}

TEST(Pool, both_classes_and_determinism) {
  const auto a = generate_pool(Pattern::builtin(1), 20, 7);
  EXPECT_EQ(a.size(), 20u);
  EXPECT_TRUE(has_both_labels(Pattern::builtin(1), a));
  EXPECT_EQ(a, generate_pool(Pattern::builtin(1), 20, 7));
  EXPECT_NE(a, generate_pool(Pattern::builtin(1), 20, 8));
  for (const auto& d : a) {
    EXPECT_GE(d.x, 0.0);
    EXPECT_LT(d.x, kPi);
    EXPECT_FALSE(d.label.has_value());
  }
  for (std::uint64_t s = 0; s < 100; ++s) {
    const Pattern p3 = Pattern::builtin(3);
    const auto pool = label_all(p3, generate_pool(p3, 20, s));
    int plus = 0;
    for (const auto& d : pool) plus += *d.label == Label::plus;
    ASSERT_GE(plus, 1) << "seed " << s;
  }
  EXPECT_THROW(generate_pool(Pattern::builtin(1), 1, 0), std::invalid_argument);
}

TEST(Pool, evenly_spaced_scheme) {
  const auto p = generate_pool(Pattern::builtin(2), 8, 0, PoolScheme::evenly_spaced);
  for (std::size_t j = 0; j < p.size(); ++j) EXPECT_NEAR(p[j].x, (j + 0.5) * kPi / 8, 1e-15);
}

TEST(TestGrid, examples) {
  const auto g1 = generate_test_grid(Pattern::builtin(1), 500);
  ASSERT_EQ(g1.size(), 500u);
  int plus = 0;
  for (const auto& d : g1) plus += *d.label == Label::plus;
  EXPECT_EQ(plus, 250);
  EXPECT_NEAR(g1[0].x, 0.5 * kPi / 500, 1e-15);

  const auto single = generate_test_grid(Pattern::builtin(2), 1);
  ASSERT_EQ(single.size(), 1u);
  EXPECT_NEAR(single[0].x, kPi / 2, 1e-15);

  const auto g2 = generate_test_grid(Pattern::builtin(2), 500);
  plus = 0;
  for (const auto& d : g2) plus += *d.label == Label::plus;
  EXPECT_NEAR(plus / 500.0, 0.25, 1.0 / 500);
}

TEST(Csv, points_round_trip) {
  const Pattern p = Pattern::builtin(3);
  auto pts = label_all(p, generate_pool(p, 20, 11));
  pts[3].label.reset();
  const std::string text = points_to_csv(pts);
  const auto back = points_from_csv(text);
  ASSERT_EQ(back.size(), pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    EXPECT_NEAR(back[i].x, pts[i].x, 1e-11 * std::max(1.0, pts[i].x));
    EXPECT_EQ(back[i].label, pts[i].label);
  }
  EXPECT_EQ(points_to_csv(back), text);
}

TEST(Csv, label_spellings) {
  EXPECT_EQ(parse_label("+1"), Label::plus);
  EXPECT_EQ(parse_label("-1"), Label::minus);
  EXPECT_EQ(parse_label("NA"), std::nullopt);
  EXPECT_EQ(parse_label("0"), Label::plus);
  EXPECT_EQ(parse_label("1"), Label::minus);
  EXPECT_THROW(parse_label("yes"), ConfigError);
  EXPECT_THROW(points_from_csv(std::string("x,label\n0.1\n")), ConfigError);
  EXPECT_THROW(points_from_csv(std::string("angle,label\n0.1,+1\n")), ConfigError);
}
