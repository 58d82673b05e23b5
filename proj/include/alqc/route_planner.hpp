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

// Rotation schedules for the motorised wave plates.
//
// A position is (x, theta1[, theta2]) in rotation-parameter radians; the
// physical plate travel is half of every reported cost. Stages rotate
// continuously, so distances are plain absolute differences (no wrap).

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "alqc/common.hpp"
#include "alqc/csv.hpp"

namespace alqc {

enum class RouteMetric { sum, max };

inline std::string to_string(RouteMetric m) { return m == RouteMetric::sum ? "sum" : "max"; }

inline RouteMetric parse_route_metric(const std::string& s) {
  if (s == "sum") return RouteMetric::sum;
  if (s == "max") return RouteMetric::max;
  throw ConfigError("unknown route metric '" + s + "' (expected sum or max)");
}

struct VisitPoint {
  double x = 0.0;
  std::array<double, 2> theta{0.0, 0.0};
  int n_theta = 1;

  friend bool operator==(const VisitPoint&, const VisitPoint&) = default;
};

/// Stage travel between two positions. `sum` adds the stage moves, `max`
/// assumes simultaneous motion.
inline double leg_cost(const VisitPoint& a, const VisitPoint& b, RouteMetric m) {
  const double dx = std::abs(a.x - b.x);
  const double d1 = std::abs(a.theta[0] - b.theta[0]);
  const double d2 = std::abs(a.theta[1] - b.theta[1]);
  return m == RouteMetric::sum ? dx + d1 + d2 : std::max({dx, d1, d2});
}

struct Schedule {
  VisitPoint origin;  // resting position the route starts from
  std::vector<VisitPoint> visits;
  double total_cost = 0.0;
  RouteMetric metric = RouteMetric::sum;
  std::vector<int> group_order;  // NEVQC parameter-group order, empty otherwise
};

inline double route_cost(const VisitPoint& origin, std::span<const VisitPoint> visits, RouteMetric m) {
  double cost = 0.0;
  const VisitPoint* prev = &origin;
  for (const VisitPoint& v : visits) {
    cost += leg_cost(*prev, v, m);
    prev = &v;
  }
  return cost;
}

namespace detail {

inline void require_sorted(std::span<const double> xs) {
  if (xs.empty()) throw std::invalid_argument("route: need at least one x");
  if (!std::is_sorted(xs.begin(), xs.end())) throw std::invalid_argument("route: xs must be sorted ascending");
}

inline VisitPoint vp1(double x, double t) { return {x, {t, 0.0}, 1}; }
inline VisitPoint vp2(double x, double t1, double t2) { return {x, {t1, t2}, 2}; }

}  // namespace detail

/// The five (rho1, rho2) configurations needed by one NEVQC gradient epoch:
/// base, rho1 +- pi/4, rho2 +- pi/4.
inline std::array<std::array<double, 2>, 5> nevqc_groups(double rho1, double rho2) {
  return {{{rho1, rho2},
           {rho1 + kQuarterPi, rho2},
           {rho1 - kQuarterPi, rho2},
           {rho1, rho2 + kQuarterPi},
           {rho1, rho2 - kQuarterPi}}};
}

/// U-shaped route: from (x1, theta) turn to theta + pi/4, sweep x up, turn
/// back to theta, sweep x down. Costs 2D + pi/2 under the sum metric.
inline Schedule plan_vqc_route(std::span<const double> xs, double theta, RouteMetric m = RouteMetric::sum) {
  detail::require_sorted(xs);
  Schedule s;
  s.metric = m;
  s.origin = detail::vp1(xs.front(), theta);
  s.visits.reserve(2 * xs.size());
  for (double x : xs) s.visits.push_back(detail::vp1(x, theta + kQuarterPi));
  for (auto it = xs.rbegin(); it != xs.rend(); ++it) s.visits.push_back(detail::vp1(*it, theta));
  s.total_cost = route_cost(s.origin, s.visits, m);
  return s;
}

namespace detail {

inline std::vector<VisitPoint> nevqc_snake(std::span<const double> xs,
                                           const std::array<std::array<double, 2>, 5>& groups,
                                           std::span<const int> order) {
  std::vector<VisitPoint> v;
  v.reserve(5 * xs.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    const auto& g = groups[static_cast<std::size_t>(order[k])];
    if (k % 2 == 0) {
      for (double x : xs) v.push_back(vp2(x, g[0], g[1]));
    } else {
      for (auto it = xs.rbegin(); it != xs.rend(); ++it) v.push_back(vp2(*it, g[0], g[1]));
    }
  }
  return v;
}

}  // namespace detail

/// Group-contiguous snake route for NEVQC. Each parameter group is swept
/// along x, alternating direction; the group order is the cheapest of all
/// 120 permutations (first in lexicographic order on ties). The route starts
/// at its first visit.
inline Schedule plan_nevqc_route(std::span<const double> xs, double rho1, double rho2,
                                 RouteMetric m = RouteMetric::sum) {
  detail::require_sorted(xs);
  const auto groups = nevqc_groups(rho1, rho2);
  std::array<int, 5> perm{0, 1, 2, 3, 4};
  Schedule best;
  best.metric = m;
  bool have = false;
  do {
    auto visits = detail::nevqc_snake(xs, groups, perm);
    const double cost = route_cost(visits.front(), visits, m);
    if (!have || cost < best.total_cost) {
      best.origin = visits.front();
      best.visits = std::move(visits);
      best.total_cost = cost;
      best.group_order.assign(perm.begin(), perm.end());
      have = true;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

/// Baseline without x-priority: every x is finished (all parameter
/// configurations) before moving on, in input order. VQC visits theta + pi/4
/// then theta per x, starting from (x1, theta); NEVQC visits the five groups
/// in index order per x, starting at its first visit.
inline Schedule naive_vqc_route(std::span<const double> xs, double theta, RouteMetric m = RouteMetric::sum) {
  if (xs.empty()) throw std::invalid_argument("route: need at least one x");
  Schedule s;
  s.metric = m;
  s.origin = detail::vp1(xs.front(), theta);
  for (double x : xs) {
    s.visits.push_back(detail::vp1(x, theta + kQuarterPi));
    s.visits.push_back(detail::vp1(x, theta));
  }
  s.total_cost = route_cost(s.origin, s.visits, m);
  return s;
}

inline Schedule naive_nevqc_route(std::span<const double> xs, double rho1, double rho2,
                                  RouteMetric m = RouteMetric::sum) {
  if (xs.empty()) throw std::invalid_argument("route: need at least one x");
  const auto groups = nevqc_groups(rho1, rho2);
  Schedule s;
  s.metric = m;
  for (double x : xs)
    for (const auto& g : groups) s.visits.push_back(detail::vp2(x, g[0], g[1]));
  s.origin = s.visits.front();
  s.total_cost = route_cost(s.origin, s.visits, m);
  return s;
}

/// Cumulative travel across epochs: the within-epoch cost of each schedule
/// plus the repositioning move from where the previous schedule ended.
class RouteTracker {
 public:
  explicit RouteTracker(RouteMetric m = RouteMetric::sum) : metric_(m) {}

  double add(const Schedule& s) {
    double step = s.total_cost;
    double move = 0.0;
    if (last_) move = leg_cost(*last_, s.origin, metric_);
    within_ += step;
    chained_ += step + move;
    if (!s.visits.empty()) last_ = s.visits.back();
    return step + move;
  }

  double within_epoch_total() const { return within_; }
  double chained_total() const { return chained_; }
  RouteMetric metric() const { return metric_; }

 private:
  RouteMetric metric_;
  std::optional<VisitPoint> last_;
  double within_ = 0.0;
  double chained_ = 0.0;
};

/// CSV: step,x,theta1,theta2,leg_cost (theta2 empty for one-gate routes).
inline std::string schedule_to_csv(const Schedule& s) {
  std::string out = "step,x,theta1,theta2,leg_cost\n";
  const VisitPoint* prev = &s.origin;
  for (std::size_t i = 0; i < s.visits.size(); ++i) {
    const VisitPoint& v = s.visits[i];
    out += std::to_string(i) + ',' + csv::format(v.x) + ',' + csv::format(v.theta[0]) + ',' +
           (v.n_theta == 2 ? csv::format(v.theta[1]) : std::string()) + ',' + csv::format(leg_cost(*prev, v, s.metric)) +
           '\n';
    prev = &v;
  }
  return out;
}

}  // namespace alqc
