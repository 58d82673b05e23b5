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

// VQC / NEVQC training: sign-of-<Z> prediction, summed squared-error loss,
// parameter-shift gradients and Adam.
//
// Every expectation estimate that would be a hardware measurement is counted
// in an EvalCounter. Test-accuracy probes are diagnostics: they always use the
// exact model and are never counted.

#pragma once

#include <algorithm>
#include <array>
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
#include "alqc/datasets.hpp"
#include "alqc/qsim.hpp"
#include "alqc/route_planner.hpp"

namespace alqc {

struct EvalCounter {
  std::uint64_t evaluations = 0;
  double rotation_distance = 0.0;  // chained stage travel, rotation-parameter radians
};

struct TrainConfig {
  std::size_t epochs = 35;
  Backend backend = Backend::analytic;
  std::uint64_t shots = kDefaultShotsVqc;
  double learning_rate = 0.1;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  std::uint64_t seed = 0;
  std::size_t test_interval = 5;
  RouteMetric route_metric = RouteMetric::sum;

  void validate() const {
    if (backend == Backend::sampled && shots < 1) throw ConfigError("shots must be >= 1 for the sampled backend");
    if (!(adam_beta1 > 0.0 && adam_beta1 < 1.0)) throw ConfigError("adam_beta1 must lie in (0, 1)");
    if (!(adam_beta2 > 0.0 && adam_beta2 < 1.0)) throw ConfigError("adam_beta2 must lie in (0, 1)");
    if (!(adam_eps > 0.0)) throw ConfigError("adam_eps must be positive");
    if (!(learning_rate > 0.0)) throw ConfigError("learning_rate must be positive");
    if (test_interval < 1) throw ConfigError("test_interval must be >= 1");
  }
};

/// Uniform initial rotations on [0, pi).
inline ModelParams initial_params(Circuit c, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, kPi);
  ModelParams p;
  p.circuit = c;
  p.rho[0] = u(rng);
  p.rho[1] = c == Circuit::vqc ? 0.0 : u(rng);
  return p;
}

namespace detail {

inline double label_of(const DataPoint& d) {
  if (!d.label) throw std::invalid_argument("training data item without a label");
  return value(*d.label);
}

inline void require_nonempty(std::span<const DataPoint> data) {
  if (data.empty()) throw std::invalid_argument("empty training data");
}

inline ModelParams shifted(ModelParams p, std::size_t k, double delta) {
  p.rho[k] += delta;
  return p;
}

}  // namespace detail

/// Counted expectation estimate.
inline double measure(const ModelParams& p, double x, ExpectationEstimator& est, EvalCounter& counter) {
  ++counter.evaluations;
  return est(p, x);
}

/// +1 when <Z> >= 0 (zero maps to +1), else -1.
inline Label predict(const ModelParams& p, double x, ExpectationEstimator& est, EvalCounter& counter) {
  return label_from_sign(measure(p, x, est, counter));
}

/// Exact-model accuracy on a labelled set; not counted.
inline double test_accuracy(const ModelParams& p, std::span<const DataPoint> grid) {
  if (grid.empty()) return 0.0;
  std::size_t ok = 0;
  for (const DataPoint& d : grid)
    if (label_from_sign(analytic_expectation(p, d.x)) == d.label) ++ok;
  return static_cast<double>(ok) / static_cast<double>(grid.size());
}

/// C = sum_i (<Z(x_i)> - y_i)^2; one evaluation per item.
inline double mse_loss(const ModelParams& p, std::span<const DataPoint> data, ExpectationEstimator& est,
                       EvalCounter& counter) {
  detail::require_nonempty(data);
  double c = 0.0;
  for (const DataPoint& d : data) {
    const double r = measure(p, d.x, est, counter) - detail::label_of(d);
    c += r * r;
  }
  return c;
}

/// One-shift VQC gradient sum_i (<Z(theta)> - y_i)(2 P0(theta + pi/4) - 1).
/// Uses P0(theta + pi/4) + P0(theta - pi/4) = 1, so only the positions
/// (x_i, theta) and (x_i, theta + pi/4) are measured: 2 evaluations per item.
/// Equals dC/dtheta / 4.
inline double gradient_vqc(const ModelParams& p, std::span<const DataPoint> data, ExpectationEstimator& est,
                           EvalCounter& counter) {
  detail::require_nonempty(data);
  const ModelParams up = detail::shifted(p, 0, kQuarterPi);
  double g = 0.0;
  for (const DataPoint& d : data) {
    const double r = measure(p, d.x, est, counter) - detail::label_of(d);
    // 2 P0 - 1 of the shifted configuration is its <Z> estimate.
    g += r * measure(up, d.x, est, counter);
  }
  return g;
}

/// Two-shift form sum_i (<Z> - y_i)(<Z(theta + pi/4)> - <Z(theta - pi/4)>)/2;
/// 3 evaluations per item. Reference for the one-shift form.
inline double gradient_vqc_two_shift(const ModelParams& p, std::span<const DataPoint> data, ExpectationEstimator& est,
                                     EvalCounter& counter) {
  detail::require_nonempty(data);
  const ModelParams up = detail::shifted(p, 0, kQuarterPi);
  const ModelParams down = detail::shifted(p, 0, -kQuarterPi);
  double g = 0.0;
  for (const DataPoint& d : data) {
    const double r = measure(p, d.x, est, counter) - detail::label_of(d);
    g += r * (measure(up, d.x, est, counter) - measure(down, d.x, est, counter)) / 2.0;
  }
  return g;
}

/// NEVQC shift gradients, one component per gate with the other held fixed;
/// 5 evaluations per item. The post-selected <Z> is not a single sinusoid in
/// either rotation, so these are shift-rule estimates rather than exact
/// derivatives.
inline std::array<double, 2> gradient_nevqc(const ModelParams& p, std::span<const DataPoint> data,
                                            ExpectationEstimator& est, EvalCounter& counter) {
  detail::require_nonempty(data);
  std::array<double, 2> g{0.0, 0.0};
  for (const DataPoint& d : data) {
    const double r = measure(p, d.x, est, counter) - detail::label_of(d);
    for (std::size_t k = 0; k < 2; ++k) {
      const double zu = measure(detail::shifted(p, k, kQuarterPi), d.x, est, counter);
      const double zd = measure(detail::shifted(p, k, -kQuarterPi), d.x, est, counter);
      g[k] += r * (zu - zd) / 2.0;
    }
  }
  return g;
}

struct Objective {
  double loss = 0.0;
  std::array<double, 2> grad{0.0, 0.0};
};

/// Loss and gradient of one epoch with the unshifted expectations shared:
/// 2 evaluations per item for VQC, 5 for NEVQC.
inline Objective loss_and_gradient(const ModelParams& p, std::span<const DataPoint> data, ExpectationEstimator& est,
                                   EvalCounter& counter) {
  detail::require_nonempty(data);
  Objective o;
  if (p.circuit == Circuit::vqc) {
    const ModelParams up = detail::shifted(p, 0, kQuarterPi);
    for (const DataPoint& d : data) {
      const double r = measure(p, d.x, est, counter) - detail::label_of(d);
      o.loss += r * r;
      o.grad[0] += r * measure(up, d.x, est, counter);
    }
    return o;
  }
  for (const DataPoint& d : data) {
    const double r = measure(p, d.x, est, counter) - detail::label_of(d);
    o.loss += r * r;
    for (std::size_t k = 0; k < 2; ++k) {
      const double zu = measure(detail::shifted(p, k, kQuarterPi), d.x, est, counter);
      const double zd = measure(detail::shifted(p, k, -kQuarterPi), d.x, est, counter);
      o.grad[k] += r * (zu - zd) / 2.0;
    }
  }
  return o;
}

struct AdamState {
  std::array<double, 2> m{0.0, 0.0};
  std::array<double, 2> v{0.0, 0.0};
  std::uint64_t t = 0;
};

/// Bias-corrected Adam descent step on the active parameters.
inline void adam_step(AdamState& s, ModelParams& p, const std::array<double, 2>& grad, const TrainConfig& cfg) {
  ++s.t;
  const double c1 = 1.0 - std::pow(cfg.adam_beta1, static_cast<double>(s.t));
  const double c2 = 1.0 - std::pow(cfg.adam_beta2, static_cast<double>(s.t));
  for (std::size_t k = 0; k < p.size(); ++k) {
    s.m[k] = cfg.adam_beta1 * s.m[k] + (1.0 - cfg.adam_beta1) * grad[k];
    s.v[k] = cfg.adam_beta2 * s.v[k] + (1.0 - cfg.adam_beta2) * grad[k] * grad[k];
    const double m_hat = s.m[k] / c1;
    const double v_hat = s.v[k] / c2;
    p.rho[k] -= cfg.learning_rate * m_hat / (std::sqrt(v_hat) + cfg.adam_eps);
  }
}

struct TraceRow {
  std::size_t epoch = 0;
  std::size_t labeled_size = 0;
  std::uint64_t evaluations = 0;
  double rotation_distance = 0.0;
  std::optional<double> loss;           // training loss measured during the epoch
  std::optional<double> test_accuracy;  // probe rows only

  friend bool operator==(const TraceRow&, const TraceRow&) = default;
};

struct RunTrace {
  std::vector<TraceRow> rows;

  /// (evaluations, accuracy, labeled_size) of every probe row.
  struct Probe {
    std::uint64_t evaluations;
    double accuracy;
    std::size_t labeled_size;
  };
  std::vector<Probe> probes() const {
    std::vector<Probe> out;
    for (const TraceRow& r : rows)
      if (r.test_accuracy) out.push_back({r.evaluations, *r.test_accuracy, r.labeled_size});
    return out;
  }

  std::vector<double> losses() const {
    std::vector<double> out;
    for (const TraceRow& r : rows)
      if (r.loss) out.push_back(*r.loss);
    return out;
  }

  std::vector<double> accuracies() const {
    std::vector<double> out;
    for (const TraceRow& r : rows)
      if (r.test_accuracy) out.push_back(*r.test_accuracy);
    return out;
  }

  std::string to_csv() const {
    std::string s = "epoch,labeled_size,evaluations,rotation_distance,loss,test_accuracy\n";
    for (const TraceRow& r : rows) {
      s += std::to_string(r.epoch) + ',' + std::to_string(r.labeled_size) + ',' + std::to_string(r.evaluations) + ',' +
           csv::format(r.rotation_distance) + ',' + (r.loss ? csv::format(*r.loss) : std::string()) + ',' +
           (r.test_accuracy ? csv::format(*r.test_accuracy) : std::string()) + '\n';
    }
    return s;
  }

  static RunTrace from_csv(const std::string& text) {
    std::istringstream in(text);
    const csv::Table t = csv::read(in);
    const std::size_t ce = t.column("epoch"), cl = t.column("labeled_size"), cv = t.column("evaluations"),
                      cr = t.column("rotation_distance"), cs = t.column("loss"), ca = t.column("test_accuracy");
    RunTrace tr;
    for (const auto& row : t.rows) {
      TraceRow r;
      r.epoch = csv::parse_u64(row[ce]);
      r.labeled_size = csv::parse_u64(row[cl]);
      r.evaluations = csv::parse_u64(row[cv]);
      r.rotation_distance = csv::parse_double(row[cr]);
      if (!csv::trim(row[cs]).empty()) r.loss = csv::parse_double(row[cs]);
      if (!csv::trim(row[ca]).empty()) r.test_accuracy = csv::parse_double(row[ca]);
      tr.rows.push_back(r);
    }
    return tr;
  }
};

/// Stateful training loop shared by plain and active-learning training.
/// Keeps parameters, Adam moments, the estimator, evaluation counter, route
/// tracker and trace across calls, so successive rounds warm-start.
class Trainer {
 public:
  Trainer(ModelParams params0, const TrainConfig& cfg, std::vector<DataPoint> test_grid)
      : cfg_(cfg),
        params_(params0),
        est_(cfg.backend, cfg.shots, derive_seed(cfg.seed, {stream::shots})),
        route_(cfg.route_metric),
        test_grid_(std::move(test_grid)) {
    cfg_.validate();
  }

  const ModelParams& params() const { return params_; }
  const EvalCounter& counter() const { return counter_; }
  EvalCounter& counter() { return counter_; }
  ExpectationEstimator& estimator() { return est_; }
  const RunTrace& trace() const { return trace_; }
  const TrainConfig& config() const { return cfg_; }
  std::size_t epoch() const { return epoch_; }

  /// Restart from the given parameters with fresh Adam moments.
  void reset_params(const ModelParams& p) {
    params_ = p;
    adam_ = AdamState{};
  }

  void record_initial(std::size_t labeled_size) {
    TraceRow r = row(labeled_size);
    r.test_accuracy = test_accuracy(params_, test_grid_);
    trace_.rows.push_back(r);
  }

  /// Runs `n` epochs on `labeled`. Probes test accuracy every `probe_every`
  /// epochs of the global epoch count, and always after the last epoch when
  /// `probe_last` is set.
  void run_epochs(std::span<const DataPoint> labeled, std::size_t n, std::size_t probe_every, bool probe_last) {
    if (n == 0) return;
    detail::require_nonempty(labeled);
    std::vector<double> xs;
    xs.reserve(labeled.size());
    for (const DataPoint& d : labeled) xs.push_back(d.x);
    std::sort(xs.begin(), xs.end());
    for (std::size_t i = 0; i < n; ++i) {
      add_route(params_.circuit == Circuit::vqc ? plan_vqc_route(xs, params_.rho[0], cfg_.route_metric)
                                                : plan_nevqc_route(xs, params_.rho[0], params_.rho[1], cfg_.route_metric));
      const Objective o = loss_and_gradient(params_, labeled, est_, counter_);
      adam_step(adam_, params_, o.grad, cfg_);
      ++epoch_;
      TraceRow r = row(labeled.size());
      r.loss = o.loss;
      const bool last = i + 1 == n;
      if ((probe_every > 0 && epoch_ % probe_every == 0) || (probe_last && last))
        r.test_accuracy = test_accuracy(params_, test_grid_);
      trace_.rows.push_back(r);
    }
  }

  /// Stage travel of a pool scan at the current parameters (one sweep in x).
  void add_scan_route(std::vector<double> xs) {
    if (xs.empty()) return;
    std::sort(xs.begin(), xs.end());
    Schedule s;
    s.metric = cfg_.route_metric;
    for (double x : xs) s.visits.push_back({x, params_.rho, static_cast<int>(params_.size())});
    s.origin = s.visits.front();
    s.total_cost = route_cost(s.origin, s.visits, s.metric);
    add_route(s);
  }

 private:
  void add_route(const Schedule& s) {
    route_.add(s);
    counter_.rotation_distance = route_.chained_total();
  }

  TraceRow row(std::size_t labeled_size) const {
    TraceRow r;
    r.epoch = epoch_;
    r.labeled_size = labeled_size;
    r.evaluations = counter_.evaluations;
    r.rotation_distance = counter_.rotation_distance;
    return r;
  }

  TrainConfig cfg_;
  ModelParams params_;
  AdamState adam_;
  ExpectationEstimator est_;
  EvalCounter counter_;
  RouteTracker route_;
  RunTrace trace_;
  std::vector<DataPoint> test_grid_;
  std::size_t epoch_ = 0;
};

struct TrainResult {
  ModelParams params;
  RunTrace trace;
  EvalCounter counter;
};

/// Plain training for cfg.epochs epochs on all of `data`, probing every
/// cfg.test_interval epochs and after the last epoch.
inline TrainResult train(const ModelParams& params0, std::span<const DataPoint> data, const TrainConfig& cfg,
                         std::vector<DataPoint> test_grid) {
  detail::require_nonempty(data);
  Trainer t(params0, cfg, std::move(test_grid));
  t.record_initial(data.size());
  t.run_epochs(data, cfg.epochs, cfg.test_interval, true);
  return {t.params(), t.trace(), t.counter()};
}

}  // namespace alqc
