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

// Classical binary classifiers for the query-by-committee strategy: RBF
// support vector classifier (SMO), 3-nearest-neighbour, Fisher LDA and a
// depth-limited CART tree. All work on the 2-D features (cos x, sin x).

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "alqc/common.hpp"
#include "alqc/datasets.hpp"

namespace alqc {

struct FeatureVector {
  double f1 = 1.0;
  double f2 = 0.0;

  static FeatureVector from_angle(double x) { return {std::cos(x), std::sin(x)}; }
};

struct LabeledFeature {
  FeatureVector f;
  Label y = Label::plus;
};

inline std::vector<LabeledFeature> to_features(std::span<const DataPoint> pts) {
  std::vector<LabeledFeature> out;
  out.reserve(pts.size());
  for (const DataPoint& d : pts) {
    if (!d.label) throw std::invalid_argument("committee: unlabelled training item");
    out.push_back({FeatureVector::from_angle(d.x), *d.label});
  }
  return out;
}

inline double squared_distance(const FeatureVector& a, const FeatureVector& b) {
  const double d1 = a.f1 - b.f1;
  const double d2 = a.f2 - b.f2;
  return d1 * d1 + d2 * d2;
}

namespace detail {

inline void require_both_classes(std::span<const LabeledFeature> data, const char* who) {
  bool plus = false, minus = false;
  for (const auto& d : data) (d.y == Label::plus ? plus : minus) = true;
  if (!(plus && minus)) throw std::invalid_argument(std::string(who) + ": training data must contain both classes");
}

inline Label majority(std::size_t n_plus, std::size_t n_minus) { return n_plus >= n_minus ? Label::plus : Label::minus; }

}  // namespace detail

// ---------------------------------------------------------------------------
// SVC

struct SvcModel {
  std::vector<FeatureVector> x;
  std::vector<double> coef;  // alpha_i * y_i
  double bias = 0.0;
  double gamma = 1.0;

  double kernel(const FeatureVector& a, const FeatureVector& b) const {
    return std::exp(-gamma * squared_distance(a, b));
  }
  double decision(const FeatureVector& u) const {
    double s = bias;
    for (std::size_t i = 0; i < x.size(); ++i) s += coef[i] * kernel(x[i], u);
    return s;
  }
  Label predict(const FeatureVector& u) const { return label_from_sign(decision(u)); }
};

struct SvcFit {
  SvcModel model;
  std::vector<double> alpha;
  std::vector<double> dual_history;  // dual objective before the first and after every SMO step
  std::size_t iterations = 0;
  bool converged = false;
};

/// Dual objective sum(alpha) - 1/2 sum_ij alpha_i alpha_j y_i y_j K_ij.
inline double svc_dual_objective(std::span<const LabeledFeature> data, std::span<const double> alpha, double gamma) {
  double lin = 0.0, quad = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    lin += alpha[i];
    for (std::size_t j = 0; j < data.size(); ++j)
      quad += alpha[i] * alpha[j] * value(data[i].y) * value(data[j].y) *
              std::exp(-gamma * squared_distance(data[i].f, data[j].f));
  }
  return lin - 0.5 * quad;
}

/// "scale" kernel width 1 / (n_features * variance of all feature entries).
inline double default_svc_gamma(std::span<const LabeledFeature> data) {
  if (data.empty()) return 1.0;
  double s = 0.0, s2 = 0.0;
  for (const auto& d : data) {
    s += d.f.f1 + d.f.f2;
    s2 += d.f.f1 * d.f.f1 + d.f.f2 * d.f.f2;
  }
  const double n = 2.0 * static_cast<double>(data.size());
  const double var = s2 / n - (s / n) * (s / n);
  return var > 1e-12 ? 1.0 / (2.0 * var) : 1.0;
}

/// Soft-margin RBF SVC trained by SMO with maximal-violating-pair working
/// set selection, stopped when the KKT gap m(alpha) - M(alpha) < tol.
inline SvcFit fit_svc_rbf(std::span<const LabeledFeature> data, double C, double gamma, double tol = 1e-3,
                          std::size_t max_iter = 10000) {
  if (data.size() < 2) throw std::invalid_argument("fit_svc_rbf: need at least 2 items");
  detail::require_both_classes(data, "fit_svc_rbf");
  if (!(C > 0.0) || !(gamma > 0.0)) throw std::invalid_argument("fit_svc_rbf: C and gamma must be positive");

  const std::size_t n = data.size();
  std::vector<double> K(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) K[i * n + j] = std::exp(-gamma * squared_distance(data[i].f, data[j].f));
  auto y = [&](std::size_t t) { return value(data[t].y); };

  SvcFit fit;
  std::vector<double>& alpha = fit.alpha;
  alpha.assign(n, 0.0);
  // Gradient of the minimisation form 1/2 a'Qa - e'a, Q_ij = y_i y_j K_ij.
  std::vector<double> G(n, -1.0);
  auto in_up = [&](std::size_t t) { return (y(t) > 0 && alpha[t] < C) || (y(t) < 0 && alpha[t] > 0); };
  auto in_low = [&](std::size_t t) { return (y(t) > 0 && alpha[t] > 0) || (y(t) < 0 && alpha[t] < C); };

  fit.dual_history.push_back(0.0);
  double dual = 0.0;
  for (fit.iterations = 0; fit.iterations < max_iter; ++fit.iterations) {
    std::size_t i = n, j = n;
    double m_up = -std::numeric_limits<double>::infinity();
    double m_low = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < n; ++t) {
      const double v = -y(t) * G[t];
      if (in_up(t) && v > m_up) m_up = v, i = t;
      if (in_low(t) && v < m_low) m_low = v, j = t;
    }
    if (i == n || j == n || m_up - m_low < tol) {
      fit.converged = true;
      break;
    }
    // Move along alpha_i += y_i l, alpha_j -= y_j l.
    double eta = K[i * n + i] + K[j * n + j] - 2.0 * K[i * n + j];
    if (eta <= 0.0) eta = 1e-12;
    const double gap = m_up - m_low;
    double lmax = y(i) > 0 ? C - alpha[i] : alpha[i];
    lmax = std::min(lmax, y(j) > 0 ? alpha[j] : C - alpha[j]);
    const double l = std::min(gap / eta, lmax);
    alpha[i] += y(i) * l;
    alpha[j] -= y(j) * l;
    alpha[i] = std::clamp(alpha[i], 0.0, C);
    alpha[j] = std::clamp(alpha[j], 0.0, C);
    for (std::size_t t = 0; t < n; ++t) G[t] += l * y(t) * (K[t * n + i] - K[t * n + j]);
    // Objective increases by l*gap - l^2*eta/2 along the segment.
    dual += l * gap - 0.5 * l * l * eta;
    fit.dual_history.push_back(dual);
  }

  // Offset as in LIBSVM: mean y_t G_t over free vectors, else bound midpoint.
  double ub = std::numeric_limits<double>::infinity(), lb = -std::numeric_limits<double>::infinity();
  double sum_free = 0.0;
  std::size_t n_free = 0;
  for (std::size_t t = 0; t < n; ++t) {
    const double yg = y(t) * G[t];
    if (alpha[t] >= C) {
      if (y(t) < 0) ub = std::min(ub, yg);
      else lb = std::max(lb, yg);
    } else if (alpha[t] <= 0.0) {
      if (y(t) > 0) ub = std::min(ub, yg);
      else lb = std::max(lb, yg);
    } else {
      ++n_free;
      sum_free += yg;
    }
  }
  const double rho = n_free > 0 ? sum_free / static_cast<double>(n_free) : (ub + lb) / 2.0;

  fit.model.gamma = gamma;
  fit.model.bias = -rho;
  for (std::size_t t = 0; t < n; ++t) {
    if (alpha[t] > 0.0) {
      fit.model.x.push_back(data[t].f);
      fit.model.coef.push_back(alpha[t] * y(t));
    }
  }
  return fit;
}

// ---------------------------------------------------------------------------
// k-nearest neighbours

struct KnnModel {
  std::vector<LabeledFeature> train;
  std::size_t k = 3;

  /// Indices of the min(k, n) nearest training items; distance ties go to
  /// the smaller training index.
  std::vector<std::size_t> neighbours(const FeatureVector& u) const {
    std::vector<std::size_t> idx(train.size());
    std::iota(idx.begin(), idx.end(), 0);
    const std::size_t kk = std::min(k, train.size());
    std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(kk), idx.end(),
                      [&](std::size_t a, std::size_t b) {
                        const double da = squared_distance(train[a].f, u), db = squared_distance(train[b].f, u);
                        return da < db || (da == db && a < b);
                      });
    idx.resize(kk);
    return idx;
  }

  Label predict(const FeatureVector& u) const {
    std::size_t plus = 0, minus = 0;
    for (std::size_t i : neighbours(u)) (train[i].y == Label::plus ? plus : minus) += 1;
    return detail::majority(plus, minus);
  }
};

inline KnnModel fit_knn(std::span<const LabeledFeature> data, std::size_t k = 3) {
  if (data.empty()) throw std::invalid_argument("fit_knn: empty training data");
  return {std::vector<LabeledFeature>(data.begin(), data.end()), k};
}

// ---------------------------------------------------------------------------
// Fisher LDA

struct LdaModel {
  std::array<double, 2> w{0.0, 0.0};
  double threshold = 0.0;

  double project(const FeatureVector& u) const { return w[0] * u.f1 + w[1] * u.f2; }
  Label predict(const FeatureVector& u) const { return project(u) >= threshold ? Label::plus : Label::minus; }
};

/// w = (S_w + ridge I)^-1 (mu_plus - mu_minus); threshold at the midpoint of
/// the projected class means.
inline LdaModel fit_lda(std::span<const LabeledFeature> data, double ridge = 1e-9) {
  detail::require_both_classes(data, "fit_lda");
  std::array<double, 2> mp{0, 0}, mm{0, 0};
  std::size_t np = 0, nm = 0;
  for (const auto& d : data) {
    auto& m = d.y == Label::plus ? mp : mm;
    m[0] += d.f.f1;
    m[1] += d.f.f2;
    ++(d.y == Label::plus ? np : nm);
  }
  for (auto& v : mp) v /= static_cast<double>(np);
  for (auto& v : mm) v /= static_cast<double>(nm);

  double s00 = ridge, s01 = 0.0, s11 = ridge;
  for (const auto& d : data) {
    const auto& m = d.y == Label::plus ? mp : mm;
    const double a = d.f.f1 - m[0], b = d.f.f2 - m[1];
    s00 += a * a;
    s01 += a * b;
    s11 += b * b;
  }
  const double det = s00 * s11 - s01 * s01;
  const double d0 = mp[0] - mm[0], d1 = mp[1] - mm[1];
  LdaModel lda;
  lda.w = {(s11 * d0 - s01 * d1) / det, (-s01 * d0 + s00 * d1) / det};
  lda.threshold = 0.5 * (lda.w[0] * (mp[0] + mm[0]) + lda.w[1] * (mp[1] + mm[1]));
  return lda;
}

// ---------------------------------------------------------------------------
// CART

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;   // value <= threshold
  int right = -1;  // value > threshold
  Label leaf = Label::plus;
  std::size_t depth = 0;
};

struct TreeModel {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  Label predict(const FeatureVector& u) const {
    int at = 0;
    while (nodes[static_cast<std::size_t>(at)].feature >= 0) {
      const TreeNode& n = nodes[static_cast<std::size_t>(at)];
      const double v = n.feature == 0 ? u.f1 : u.f2;
      at = v <= n.threshold ? n.left : n.right;
    }
    return nodes[static_cast<std::size_t>(at)].leaf;
  }

  std::size_t depth() const {
    std::size_t d = 0;
    for (const auto& n : nodes) d = std::max(d, n.depth);
    return d;
  }
};

namespace detail {

inline double gini(std::size_t plus, std::size_t total) {
  if (total == 0) return 0.0;
  const double p = static_cast<double>(plus) / static_cast<double>(total);
  return 2.0 * p * (1.0 - p);
}

inline int build_tree(TreeModel& t, std::span<const LabeledFeature> data, std::vector<std::size_t> idx,
                      std::size_t depth, std::size_t max_depth) {
  std::size_t plus = 0;
  for (std::size_t i : idx) plus += data[i].y == Label::plus;
  const std::size_t n = idx.size();
  const int id = static_cast<int>(t.nodes.size());
  t.nodes.push_back({});
  t.nodes.back().depth = depth;
  t.nodes.back().leaf = majority(plus, n - plus);
  if (depth >= max_depth || plus == 0 || plus == n || n < 2) return id;

  int best_f = -1;
  double best_thr = 0.0;
  double best_imp = std::numeric_limits<double>::infinity();
  for (int f = 0; f < 2; ++f) {
    auto val = [&](std::size_t i) { return f == 0 ? data[i].f.f1 : data[i].f.f2; };
    std::vector<std::size_t> order = idx;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return val(a) < val(b); });
    std::size_t left_plus = 0;
    for (std::size_t k = 0; k + 1 < n; ++k) {
      left_plus += data[order[k]].y == Label::plus;
      const double a = val(order[k]), b = val(order[k + 1]);
      if (!(a < b)) continue;
      const std::size_t nl = k + 1, nr = n - nl;
      const double imp = (static_cast<double>(nl) * gini(left_plus, nl) +
                          static_cast<double>(nr) * gini(plus - left_plus, nr)) /
                         static_cast<double>(n);
      if (imp < best_imp) {
        best_imp = imp;
        best_f = f;
        best_thr = 0.5 * (a + b);
      }
    }
  }
  if (best_f < 0) return id;

  std::vector<std::size_t> li, ri;
  for (std::size_t i : idx) ((best_f == 0 ? data[i].f.f1 : data[i].f.f2) <= best_thr ? li : ri).push_back(i);
  const int l = build_tree(t, data, std::move(li), depth + 1, max_depth);
  const int r = build_tree(t, data, std::move(ri), depth + 1, max_depth);
  TreeNode& node = t.nodes[static_cast<std::size_t>(id)];
  node.feature = best_f;
  node.threshold = best_thr;
  node.left = l;
  node.right = r;
  return id;
}

}  // namespace detail

/// Gini-minimising axis-aligned splits at midpoints of sorted distinct
/// values. Leaves at max depth, purity or fewer than 2 samples; majority
/// label with ties to +1.
inline TreeModel fit_tree(std::span<const LabeledFeature> data, std::size_t max_depth = 7) {
  if (data.empty()) throw std::invalid_argument("fit_tree: empty training data");
  TreeModel t;
  std::vector<std::size_t> idx(data.size());
  std::iota(idx.begin(), idx.end(), 0);
  detail::build_tree(t, data, std::move(idx), 0, max_depth);
  return t;
}

// ---------------------------------------------------------------------------
// Committee

struct CommitteeConfig {
  double svc_C = 1.0;
  double svc_gamma = 0.0;  // <= 0 selects default_svc_gamma
  double svc_tol = 1e-3;
  std::size_t svc_max_iter = 10000;
  std::size_t knn_k = 3;
  double lda_ridge = 1e-9;
  std::size_t tree_max_depth = 7;
};

struct Committee {
  SvcModel svc;
  KnnModel knn;
  LdaModel lda;
  TreeModel tree;

  static constexpr std::size_t size() { return 4; }

  std::array<Label, 4> votes(const FeatureVector& u) const {
    return {svc.predict(u), knn.predict(u), lda.predict(u), tree.predict(u)};
  }
};

inline Committee fit_committee(std::span<const DataPoint> labeled, const CommitteeConfig& cfg = {}) {
  const auto data = to_features(labeled);
  detail::require_both_classes(data, "fit_committee");
  const double gamma = cfg.svc_gamma > 0.0 ? cfg.svc_gamma : default_svc_gamma(data);
  Committee c;
  c.svc = fit_svc_rbf(data, cfg.svc_C, gamma, cfg.svc_tol, cfg.svc_max_iter).model;
  c.knn = fit_knn(data, cfg.knn_k);
  c.lda = fit_lda(data, cfg.lda_ridge);
  c.tree = fit_tree(data, cfg.tree_max_depth);
  return c;
}

}  // namespace alqc
