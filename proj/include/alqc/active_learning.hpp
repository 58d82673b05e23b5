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

// Pool-based active learning: uncertainty sampling (USAMP) and
// query-by-committee (QBC) around the VQC / NEVQC trainer.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "alqc/classifier.hpp"
#include "alqc/committee.hpp"
#include "alqc/common.hpp"
#include "alqc/datasets.hpp"

namespace alqc {

enum class Strategy { none, usamp, qbc };

inline std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::none: return "none";
    case Strategy::usamp: return "usamp";
    case Strategy::qbc: return "qbc";
  }
  return "?";
}

inline Strategy parse_strategy(const std::string& s) {
  if (s == "none") return Strategy::none;
  if (s == "usamp" || s == "USAMP") return Strategy::usamp;
  if (s == "qbc" || s == "QBC") return Strategy::qbc;
  throw ConfigError("unknown strategy '" + s + "' (expected none, usamp or qbc)");
}

/// U = -max(P+, P-) with P+ = (1 + <Z>)/2. Ranges over [-1, -1/2].
inline double usamp_score_from_expectation(double z) {
  const double p_plus = (1.0 + z) / 2.0;
  return -std::max(p_plus, 1.0 - p_plus);
}

inline double usamp_score(const ModelParams& p, double x, ExpectationEstimator& est, EvalCounter& counter) {
  return usamp_score_from_expectation(measure(p, x, est, counter));
}

/// E = -sum_j (V_j / C) ln(V_j / C) over labels that received votes.
inline double qbc_vote_entropy(std::span<const Label> votes) {
  if (votes.empty()) throw std::invalid_argument("qbc_vote_entropy: no votes");
  std::size_t plus = 0;
  for (Label v : votes) plus += v == Label::plus;
  const double c = static_cast<double>(votes.size());
  double e = 0.0;
  for (std::size_t n : {plus, votes.size() - plus}) {
    if (n == 0) continue;
    const double f = static_cast<double>(n) / c;
    e -= f * std::log(f);
  }
  return e;
}

struct Selection {
  std::size_t index = 0;  // position in the unlabelled pool
  double score = 0.0;
};

/// argmax of the USAMP score; ties go to the smallest index. Adds one
/// evaluation per pool item to `counter`.
inline Selection select_usamp(const ModelParams& p, std::span<const DataPoint> pool, ExpectationEstimator& est,
                              EvalCounter& counter) {
  if (pool.empty()) throw std::invalid_argument("select_next: empty pool");
  Selection best{0, -std::numeric_limits<double>::infinity()};
  for (std::size_t i = 0; i < pool.size(); ++i) {
    const double u = usamp_score(p, pool[i].x, est, counter);
    if (u > best.score) best = {i, u};
  }
  return best;
}

/// argmax of the committee vote entropy; ties go to the smallest index. No
/// quantum evaluations.
inline Selection select_qbc(const Committee& c, std::span<const DataPoint> pool) {
  if (pool.empty()) throw std::invalid_argument("select_next: empty pool");
  Selection best{0, -std::numeric_limits<double>::infinity()};
  for (std::size_t i = 0; i < pool.size(); ++i) {
    const auto votes = c.votes(FeatureVector::from_angle(pool[i].x));
    const double e = qbc_vote_entropy(votes);
    if (e > best.score) best = {i, e};
  }
  return best;
}

struct SelectionRound {
  std::size_t round_index = 0;
  double chosen_x = 0.0;
  double score = 0.0;
  std::size_t labeled_size_after = 0;
  std::uint64_t evaluations_spent = 0;  // cumulative, after the round's training
  ModelParams params_at_selection;
  std::vector<double> pool_at_selection;  // unlabelled angles offered to the selector
};

struct AlConfig {
  Strategy strategy = Strategy::usamp;
  TrainConfig train;
  std::size_t rounds = 10;
  std::size_t epochs_per_round = 10;
  std::size_t initial_size = 0;  // 0 selects 2 for USAMP, 3 for QBC
  /// Training epochs on the initial labelled set before the first query.
  std::size_t prototype_epochs = 10;
  bool warm_start = true;
  bool count_selection_evals = true;
  CommitteeConfig committee;

  std::size_t resolved_initial_size() const {
    if (initial_size > 0) return initial_size;
    return strategy == Strategy::qbc ? 3 : 2;
  }
};

struct AlResult {
  ModelParams params;
  RunTrace trace;
  std::vector<SelectionRound> rounds;
  EvalCounter counter;
  std::vector<DataPoint> labeled;
};

/// Random initial labelled subset containing both classes.
inline std::vector<std::size_t> seed_labeled_indices(const Pattern& pattern, std::span<const DataPoint> pool,
                                                     std::size_t k, std::uint64_t seed) {
  if (k < 2 || k > pool.size()) throw std::invalid_argument("al_train: bad initial labelled size");
  if (!has_both_labels(pattern, pool)) throw std::invalid_argument("al_train: pool lacks one of the classes");
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> idx(pool.size());
  for (int attempt = 0; attempt < 100000; ++attempt) {
    std::iota(idx.begin(), idx.end(), 0);
    std::shuffle(idx.begin(), idx.end(), rng);
    bool plus = false, minus = false;
    for (std::size_t i = 0; i < k; ++i) (pattern_label(pattern, pool[idx[i]].x) == Label::plus ? plus : minus) = true;
    if (plus && minus) return {idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k)};
  }
  throw std::runtime_error("al_train: could not draw an initial set with both classes");
}

/// Active-learning run: seed the labelled set, build a prototype, then per
/// round select one pool item, query its label and retrain.
inline AlResult al_train(const Pattern& pattern, std::span<const DataPoint> pool, const ModelParams& params0,
                         const AlConfig& cfg, std::vector<DataPoint> test_grid) {
  if (cfg.strategy == Strategy::none) throw std::invalid_argument("al_train: strategy none has no selection step");
  const std::size_t k0 = cfg.resolved_initial_size();
  if (pool.size() < k0 + cfg.rounds) throw std::invalid_argument("al_train: pool smaller than initial size + rounds");

  std::vector<DataPoint> labeled, unlabeled;
  {
    const auto seed_idx = seed_labeled_indices(pattern, pool, k0, derive_seed(cfg.train.seed, {stream::al_seed_set}));
    std::vector<bool> taken(pool.size(), false);
    for (std::size_t i : seed_idx) {
      taken[i] = true;
      labeled.push_back(labelled(pattern, pool[i].x));
    }
    for (std::size_t i = 0; i < pool.size(); ++i)
      if (!taken[i]) unlabeled.push_back({pool[i].x, std::nullopt});
  }

  Trainer trainer(params0, cfg.train, std::move(test_grid));
  trainer.record_initial(labeled.size());
  trainer.run_epochs(labeled, cfg.prototype_epochs, 0, true);

  AlResult res;
  EvalCounter uncounted;
  for (std::size_t round = 0; round < cfg.rounds; ++round) {
    SelectionRound rec;
    rec.round_index = round + 1;
    rec.params_at_selection = trainer.params();
    for (const DataPoint& d : unlabeled) rec.pool_at_selection.push_back(d.x);

    Selection sel;
    if (cfg.strategy == Strategy::usamp) {
      EvalCounter& c = cfg.count_selection_evals ? trainer.counter() : uncounted;
      sel = select_usamp(trainer.params(), unlabeled, trainer.estimator(), c);
      if (cfg.count_selection_evals) trainer.add_scan_route(rec.pool_at_selection);
    } else {
      sel = select_qbc(fit_committee(labeled, cfg.committee), unlabeled);
    }

    rec.chosen_x = unlabeled[sel.index].x;
    rec.score = sel.score;
    labeled.push_back(labelled(pattern, rec.chosen_x));
    unlabeled.erase(unlabeled.begin() + static_cast<std::ptrdiff_t>(sel.index));

    if (!cfg.warm_start) trainer.reset_params(params0);
    trainer.run_epochs(labeled, cfg.epochs_per_round, 0, true);
    rec.labeled_size_after = labeled.size();
    rec.evaluations_spent = trainer.counter().evaluations;
    res.rounds.push_back(std::move(rec));
  }

  res.params = trainer.params();
  res.trace = trainer.trace();
  res.counter = trainer.counter();
  res.labeled = std::move(labeled);
  return res;
}

inline std::string selections_to_csv(std::span<const SelectionRound> rounds) {
  std::string s = "round,chosen_x,score,labeled_size,evaluations\n";
  for (const SelectionRound& r : rounds)
    s += std::to_string(r.round_index) + ',' + csv::format(r.chosen_x) + ',' + csv::format(r.score) + ',' +
         std::to_string(r.labeled_size_after) + ',' + std::to_string(r.evaluations_spent) + '\n';
  return s;
}

}  // namespace alqc
