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

// Arc patterns, pools and test grids. Data items are angles x in [0, pi)
// standing for the unit vectors (cos x, sin x).

#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "alqc/common.hpp"
#include "alqc/csv.hpp"

namespace alqc {

/// Two dividing margins on the arc. Items with beta_min <= x < beta_max are
/// labelled +1, all others -1. The margins are centred on the arc.
struct Pattern {
  int id = 0;  // 1..3 for the built-in patterns, 0 for custom
  double delta_beta = kPi / 2;
  double beta_min = kPi / 4;
  double beta_max = 3 * kPi / 4;

  static Pattern custom(double delta_beta, int id = 0) {
    if (!(delta_beta > 0.0 && delta_beta < kPi))
      throw std::invalid_argument("pattern margin difference must lie in (0, pi)");
    return {id, delta_beta, (kPi - delta_beta) / 2, (kPi + delta_beta) / 2};
  }

  static Pattern builtin(int id) {
    switch (id) {
      case 1: return custom(kPi / 2, 1);
      case 2: return custom(kPi / 4, 2);
      case 3: return custom(std::atan(0.25), 3);
      default: throw ConfigError("unknown pattern id " + std::to_string(id) + " (expected 1, 2 or 3)");
    }
  }
};

inline Label pattern_label(const Pattern& p, double x) {
  const double r = wrap_pi(x);
  return (r >= p.beta_min && r < p.beta_max) ? Label::plus : Label::minus;
}

struct DataPoint {
  double x = 0.0;
  std::optional<Label> label;

  friend bool operator==(const DataPoint&, const DataPoint&) = default;
};

inline DataPoint labelled(const Pattern& p, double x) { return {x, pattern_label(p, x)}; }

inline bool has_both_labels(const Pattern& p, std::span<const DataPoint> pts) {
  bool plus = false, minus = false;
  for (const DataPoint& d : pts) (pattern_label(p, d.x) == Label::plus ? plus : minus) = true;
  return plus && minus;
}

enum class PoolScheme { uniform_random, evenly_spaced };

/// Unlabelled pool of n angles. The random scheme redraws the whole pool
/// until the labelling oracle sees both classes.
inline std::vector<DataPoint> generate_pool(const Pattern& p, std::size_t n, std::uint64_t seed,
                                            PoolScheme scheme = PoolScheme::uniform_random) {
  if (n < 2) throw std::invalid_argument("generate_pool: need at least 2 items");
  std::vector<DataPoint> pool(n);
  if (scheme == PoolScheme::evenly_spaced) {
    for (std::size_t j = 0; j < n; ++j) pool[j].x = (static_cast<double>(j) + 0.5) * kPi / static_cast<double>(n);
    if (!has_both_labels(p, pool)) throw std::invalid_argument("generate_pool: evenly spaced pool misses a class");
    return pool;
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, kPi);
  for (int attempt = 0; attempt < 100000; ++attempt) {
    for (DataPoint& d : pool) d.x = angle(rng);
    if (has_both_labels(p, pool)) return pool;
  }
  throw std::runtime_error("generate_pool: could not draw a pool with both classes");
}

/// Midpoint grid x_j = (j + 1/2) pi / n with oracle labels.
inline std::vector<DataPoint> generate_test_grid(const Pattern& p, std::size_t n = 500) {
  if (n < 1) throw std::invalid_argument("generate_test_grid: need n >= 1");
  std::vector<DataPoint> grid;
  grid.reserve(n);
  for (std::size_t j = 0; j < n; ++j)
    grid.push_back(labelled(p, (static_cast<double>(j) + 0.5) * kPi / static_cast<double>(n)));
  return grid;
}

inline std::vector<DataPoint> label_all(const Pattern& p, std::span<const DataPoint> pts) {
  std::vector<DataPoint> out(pts.begin(), pts.end());
  for (DataPoint& d : out) d.label = pattern_label(p, d.x);
  return out;
}

// CSV: x,label with label in {+1,-1,NA}; angles with 12 significant digits.

inline std::string points_to_csv(std::span<const DataPoint> pts) {
  std::string s = "x,label\n";
  for (const DataPoint& d : pts) {
    s += csv::format(d.x, 12);
    s += ',';
    s += d.label ? to_string(*d.label) : "NA";
    s += '\n';
  }
  return s;
}

/// Accepts +1/-1/NA, and the 0/1 class naming (0 -> +1, 1 -> -1).
inline std::optional<Label> parse_label(const std::string& raw) {
  const std::string s(csv::trim(raw));
  if (s == "+1" || s == "1.0" || s == "+1.0") return Label::plus;
  if (s == "-1" || s == "-1.0") return Label::minus;
  if (s == "NA" || s.empty()) return std::nullopt;
  if (s == "0") return Label::plus;
  if (s == "1") return Label::minus;
  throw ConfigError("bad label '" + s + "'");
}

inline std::vector<DataPoint> points_from_csv(const csv::Table& t) {
  const std::size_t cx = t.column("x");
  const std::size_t cl = t.column("label");
  std::vector<DataPoint> pts;
  pts.reserve(t.rows.size());
  for (const auto& row : t.rows) pts.push_back({csv::parse_double(row[cx]), parse_label(row[cl])});
  return pts;
}

inline std::vector<DataPoint> points_from_csv(const std::string& text) {
  std::istringstream in(text);
  return points_from_csv(csv::read(in));
}

}  // namespace alqc
