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

// Classification-line geometry and accuracy bounds.
//
// A decision boundary of either classifier is a pair of lines y + k x = 0
// through the origin. The accuracy of a line pair with included angle
// d_gamma on a pattern with margin difference d_beta is at most
// 1 - |d_beta - d_gamma| / pi.

#pragma once

#include <cmath>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "alqc/common.hpp"
#include "alqc/datasets.hpp"

namespace alqc {

inline constexpr double kVerticalSlope = std::numeric_limits<double>::infinity();

struct LinePair {
  double k1 = 0.0;  // kVerticalSlope marks a vertical line
  double k2 = 0.0;
  double gamma1 = 0.0;  // line angles in [0, pi)
  double gamma2 = 0.0;

  /// Included angle in [0, pi/2], from the angle representation.
  double included_angle() const {
    const double d = std::abs(gamma1 - gamma2);
    return std::min(d, kPi - d);
  }
};

namespace detail {

inline double line_angle(double k) { return std::isinf(k) ? kPi / 2 : wrap_pi(std::atan(-k)); }

inline double slope_ratio(double num, double den) {
  return std::abs(den) > 1e-12 ? num / den : kVerticalSlope;
}

inline LinePair make_pair(double k1, double k2) { return {k1, k2, line_angle(k1), line_angle(k2)}; }

}  // namespace detail

/// arctan|(k1 - k2)/(1 + k1 k2)|, pi/2 for perpendicular or vertical cases.
inline double included_angle_from_slopes(double k1, double k2) {
  if (std::isinf(k1) || std::isinf(k2)) {
    const double other = std::isinf(k1) ? k2 : k1;
    if (std::isinf(other)) return 0.0;
    return std::atan(1.0 / std::abs(other));
  }
  const double den = 1.0 + k1 * k2;
  if (std::abs(den) < 1e-12) return kPi / 2;
  return std::atan(std::abs((k1 - k2) / den));
}

/// VQC boundary lines: k1 = sin(rho + pi/4)/sin(rho - pi/4),
/// k2 = -sin(rho - pi/4)/sin(rho + pi/4). Always perpendicular.
inline LinePair vqc_lines(double rho) {
  const double sp = std::sin(rho + kQuarterPi);
  const double sm = std::sin(rho - kQuarterPi);
  return detail::make_pair(detail::slope_ratio(sp, sm), detail::slope_ratio(-sm, sp));
}

/// NEVQC boundary lines: k1 = cot(rho1 - rho2), k2 = cot(rho1 + rho2).
inline LinePair nevqc_lines(double rho1, double rho2) {
  auto cot = [](double a) { return detail::slope_ratio(std::cos(a), std::sin(a)); };
  return detail::make_pair(cot(rho1 - rho2), cot(rho1 + rho2));
}

inline double max_accuracy(double delta_beta, double delta_gamma) {
  return 1.0 - std::abs(delta_beta - delta_gamma) / kPi;
}

inline double vqc_max_accuracy(double delta_beta) { return max_accuracy(delta_beta, kPi / 2); }

/// A rho2 whose line pair has included angle exactly delta_beta.
inline double nevqc_optimal_rho2(double delta_beta) {
  if (delta_beta < 0.0 || delta_beta > kPi / 2) throw std::invalid_argument("delta_beta must lie in [0, pi/2]");
  return delta_beta / 2;
}

/// NEVQC included angle is arctan|tan(2 rho2)|; evaluated at the optimal
/// rho2 the bound is 1 for every margin difference.
inline double nevqc_max_accuracy(double delta_beta) {
  return max_accuracy(delta_beta, std::atan(std::abs(std::tan(2 * nevqc_optimal_rho2(delta_beta)))));
}

/// The same line pair with the +1 side facing the narrow sector, i.e. the
/// sector of angular width delta_beta is classified +1 (given rho1 centred
/// on it). rho2 and pi/2 - rho2 give the same included angle.
inline double nevqc_narrow_sector_rho2(double delta_beta) { return kPi / 2 - nevqc_optimal_rho2(delta_beta); }

/// Squared statistical overlap (sqrt(pq) + sqrt((1-p)(1-q)))^2.
inline double statistical_fidelity(double p, double q) {
  if (p < 0.0 || p > 1.0 || q < 0.0 || q > 1.0) throw std::invalid_argument("probabilities must lie in [0, 1]");
  const double o = std::sqrt(p * q) + std::sqrt((1.0 - p) * (1.0 - q));
  return o * o;
}

inline double statistical_infidelity(double p, double q) { return 1.0 - statistical_fidelity(p, q); }

inline double mean_abs_error(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("mean_abs_error: length mismatch");
  if (a.empty()) throw std::invalid_argument("mean_abs_error: empty series");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return s / static_cast<double>(a.size());
}

struct BoundRow {
  int pattern = 0;
  double delta_beta = 0.0;
  double vqc_bound = 0.0;
  double nevqc_bound = 0.0;
  double nevqc_rho2 = 0.0;
};

inline std::vector<BoundRow> bound_table() {
  std::vector<BoundRow> rows;
  for (int id = 1; id <= 3; ++id) {
    const Pattern p = Pattern::builtin(id);
    rows.push_back({id, p.delta_beta, vqc_max_accuracy(p.delta_beta), nevqc_max_accuracy(p.delta_beta),
                    nevqc_optimal_rho2(p.delta_beta)});
  }
  return rows;
}

}  // namespace alqc
