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

// Forward models of the polarization circuits.
//
// All gates are half-wave plates written in rotation-parameter form
//
//     HWP(rho) = [[cos rho,  sin rho],
//                 [sin rho, -cos rho]]
//
// where rho is twice the physical plate angle. The data qubit is prepared as
// HWP(x)|H> = cos x |H> + sin x |V>. Every amplitude in the circuit family
// stays real, so no complex arithmetic is needed.
//
// Two circuits are modelled:
//   * VQC:   HWP(rho) on the data qubit, then a Z measurement.
//   * NEVQC: HWP(rho1) on the data qubit, an ancilla in |+>, a PBS with
//            one-photon-per-port post-selection, HWP(rho2) on the ancilla and
//            post-selection of the ancilla on |0>. NEVQC* is the same circuit
//            with two-photon interference at the PBS; its outcome
//            distribution is identical.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

#include "alqc/common.hpp"

namespace alqc {

/// Real single-qubit polarization state a0|H> + a1|V>.
struct PolarizationState {
  double a0 = 1.0;
  double a1 = 0.0;

  static PolarizationState encode(double x) { return {std::cos(x), std::sin(x)}; }
  double norm2() const { return a0 * a0 + a1 * a1; }
};

inline PolarizationState hwp_apply(const PolarizationState& s, double rho) {
  const double c = std::cos(rho);
  const double sn = std::sin(rho);
  return {s.a0 * c + s.a1 * sn, s.a0 * sn - s.a1 * c};
}

/// P(|0>) at the VQC output; equals cos^2(theta - x).
inline double vqc_prob0(double x, double theta) {
  const double a0 = hwp_apply(PolarizationState::encode(x), theta).a0;
  return a0 * a0;
}

enum class Circuit { vqc, nevqc, nevqc_star };

inline bool is_nevqc(Circuit c) { return c != Circuit::vqc; }

inline std::string to_string(Circuit c) {
  switch (c) {
    case Circuit::vqc: return "VQC";
    case Circuit::nevqc: return "NEVQC";
    case Circuit::nevqc_star: return "NEVQC_STAR";
  }
  return "?";
}

inline Circuit parse_circuit(const std::string& s) {
  if (s == "VQC" || s == "vqc") return Circuit::vqc;
  if (s == "NEVQC" || s == "nevqc") return Circuit::nevqc;
  if (s == "NEVQC_STAR" || s == "nevqc_star" || s == "NEVQC*") return Circuit::nevqc_star;
  throw ConfigError("unknown classifier '" + s + "' (expected VQC, NEVQC or NEVQC_STAR)");
}

/// Trainable rotation parameters. rho[0] is the data-qubit gate (the only
/// gate of the VQC); rho[1] is the ancilla gate of NEVQC.
struct ModelParams {
  Circuit circuit = Circuit::vqc;
  std::array<double, 2> rho{0.0, 0.0};

  static ModelParams vqc(double rho) { return {Circuit::vqc, {rho, 0.0}}; }
  static ModelParams nevqc(double rho1, double rho2, bool interference = false) {
    return {interference ? Circuit::nevqc_star : Circuit::nevqc, {rho1, rho2}};
  }

  std::size_t size() const { return circuit == Circuit::vqc ? 1 : 2; }
  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// Post-selected outcome probabilities of NEVQC, conditioned on the PBS
/// coincidence (one photon per output port).
struct NevqcJoint {
  double p_d0_a0 = 0.0;  // data |0>, ancilla |0>
  double p_d1_a0 = 0.0;  // data |1>, ancilla |0>
  double p0_star = 0.0;  // ancilla |0>
  double keep_prob = 0.0;  // PBS coincidence probability
};

namespace detail {

// Pure-state route (NEVQC*): 4-dim amplitude vector indexed [d][c].
inline NevqcJoint nevqc_pure(double x, double rho1, double rho2) {
  const PolarizationState data = hwp_apply(PolarizationState::encode(x), rho1);
  const double h = 1.0 / std::sqrt(2.0);
  std::array<std::array<double, 2>, 2> amp{};
  amp[0][0] = data.a0 * h;
  amp[0][1] = data.a0 * h;
  amp[1][0] = data.a1 * h;
  amp[1][1] = data.a1 * h;
  // PBS + coincidence post-selection keeps |HH> and |VV>.
  amp[0][1] = 0.0;
  amp[1][0] = 0.0;
  const double keep = amp[0][0] * amp[0][0] + amp[1][1] * amp[1][1];
  // HWP(rho2) on the ancilla index.
  const double c = std::cos(rho2);
  const double s = std::sin(rho2);
  std::array<std::array<double, 2>, 2> out{};
  for (int d = 0; d < 2; ++d) {
    out[d][0] = c * amp[d][0] + s * amp[d][1];
    out[d][1] = s * amp[d][0] - c * amp[d][1];
  }
  NevqcJoint j;
  j.keep_prob = keep;
  if (keep > 0.0) {
    j.p_d0_a0 = out[0][0] * out[0][0] / keep;
    j.p_d1_a0 = out[1][0] * out[1][0] / keep;
  }
  j.p0_star = j.p_d0_a0 + j.p_d1_a0;
  return j;
}

// Mixed-state route (NEVQC): without interference the PBS leaves an
// incoherent mixture of |HH> and |VV> with weights |alpha|^2/2, |beta|^2/2.
inline NevqcJoint nevqc_mixed(double x, double rho1, double rho2) {
  const PolarizationState data = hwp_apply(PolarizationState::encode(x), rho1);
  const double w0 = 0.5 * data.a0 * data.a0;
  const double w1 = 0.5 * data.a1 * data.a1;
  const double keep = w0 + w1;
  // Ancilla |0> survives HWP(rho2) with cos^2; ancilla |1> with sin^2.
  const double c2 = std::cos(rho2) * std::cos(rho2);
  const double s2 = std::sin(rho2) * std::sin(rho2);
  NevqcJoint j;
  j.keep_prob = keep;
  if (keep > 0.0) {
    j.p_d0_a0 = w0 * c2 / keep;
    j.p_d1_a0 = w1 * s2 / keep;
  }
  j.p0_star = j.p_d0_a0 + j.p_d1_a0;
  return j;
}

}  // namespace detail

inline NevqcJoint nevqc_forward(double x, double rho1, double rho2, bool interference) {
  return interference ? detail::nevqc_pure(x, rho1, rho2) : detail::nevqc_mixed(x, rho1, rho2);
}

/// Simulated coincidence counts of one expectation evaluation.
struct CountRecord {
  std::uint64_t n_plus = 0;   // VQC: N13, NEVQC: N45
  std::uint64_t n_minus = 0;  // VQC: N23, NEVQC: N46
  std::uint64_t shots = 0;
  bool vanished = false;

  friend bool operator==(const CountRecord&, const CountRecord&) = default;
};

/// Multinomial shot model: each of `shots` trials lands in plus, minus or
/// discarded with probabilities (p_plus, p_minus, 1 - p_plus - p_minus).
template <class Rng>
CountRecord sample_counts(double p_plus, double p_minus, std::uint64_t shots, Rng& rng) {
  constexpr double tol = 1e-12;
  if (p_plus < -tol || p_minus < -tol) throw std::invalid_argument("sample_counts: negative probability");
  if (p_plus + p_minus > 1.0 + tol) throw std::invalid_argument("sample_counts: probabilities exceed 1");
  p_plus = std::clamp(p_plus, 0.0, 1.0);
  p_minus = std::clamp(p_minus, 0.0, 1.0 - p_plus);

  CountRecord r;
  r.shots = shots;
  if (shots > 0 && p_plus > 0.0) {
    std::binomial_distribution<std::uint64_t> plus(shots, p_plus);
    r.n_plus = plus(rng);
  }
  const std::uint64_t rest = shots - r.n_plus;
  const double q = p_plus < 1.0 ? std::min(1.0, p_minus / (1.0 - p_plus)) : 0.0;
  if (rest > 0 && q > 0.0) {
    std::binomial_distribution<std::uint64_t> minus(rest, q);
    r.n_minus = minus(rng);
  }
  r.vanished = (r.n_plus + r.n_minus == 0);
  return r;
}

inline double expectation_vqc(const CountRecord& c) {
  const std::uint64_t total = c.n_plus + c.n_minus;
  if (total == 0) throw std::domain_error("expectation_vqc: no coincidence counts");
  return (static_cast<double>(c.n_plus) - static_cast<double>(c.n_minus)) / static_cast<double>(total);
}

/// Post-selected expectation; a vanished record (no ancilla-|0> events) maps
/// to 0, the mean of a uniform prior on [-1, 1].
inline double expectation_nevqc(const CountRecord& c) {
  const std::uint64_t total = c.n_plus + c.n_minus;
  if (total == 0) return 0.0;
  return (static_cast<double>(c.n_plus) - static_cast<double>(c.n_minus)) / static_cast<double>(total);
}

inline constexpr double kVanishThreshold = 1e-15;

/// Infinite-shot <Z>.
inline double analytic_expectation(const ModelParams& p, double x) {
  if (p.circuit == Circuit::vqc) return 2.0 * vqc_prob0(x, p.rho[0]) - 1.0;
  const NevqcJoint j = nevqc_forward(x, p.rho[0], p.rho[1], p.circuit == Circuit::nevqc_star);
  if (j.p0_star < kVanishThreshold) return 0.0;
  return (j.p_d0_a0 - j.p_d1_a0) / j.p0_star;
}

/// Detection probabilities (plus, minus) per trial. For NEVQC a trial is a
/// photon pair and includes the PBS coincidence and ancilla post-selection.
inline std::array<double, 2> detection_probabilities(const ModelParams& p, double x) {
  if (p.circuit == Circuit::vqc) {
    const double p0 = vqc_prob0(x, p.rho[0]);
    return {p0, 1.0 - p0};
  }
  const NevqcJoint j = nevqc_forward(x, p.rho[0], p.rho[1], p.circuit == Circuit::nevqc_star);
  return {j.keep_prob * j.p_d0_a0, j.keep_prob * j.p_d1_a0};
}

enum class Backend { analytic, sampled };

inline std::string to_string(Backend b) { return b == Backend::analytic ? "analytic" : "sampled"; }

inline Backend parse_backend(const std::string& s) {
  if (s == "analytic") return Backend::analytic;
  if (s == "sampled") return Backend::sampled;
  throw ConfigError("unknown backend '" + s + "' (expected analytic or sampled)");
}

inline constexpr std::uint64_t kDefaultShotsVqc = 2000;
inline constexpr std::uint64_t kDefaultShotsNevqc = 5500;

inline std::uint64_t default_shots(Circuit c) { return c == Circuit::vqc ? kDefaultShotsVqc : kDefaultShotsNevqc; }

/// Produces <Z> estimates either exactly or from simulated counts. Owns its
/// generator; one instance per run, never shared across threads.
class ExpectationEstimator {
 public:
  ExpectationEstimator(Backend backend, std::uint64_t shots, std::uint64_t seed)
      : backend_(backend), shots_(shots), rng_(seed) {
    if (backend_ == Backend::sampled && shots_ == 0)
      throw std::invalid_argument("sampled backend needs shots >= 1");
  }

  Backend backend() const { return backend_; }
  std::uint64_t shots() const { return shots_; }
  std::uint64_t vanished_records() const { return vanished_; }

  double operator()(const ModelParams& p, double x) {
    if (backend_ == Backend::analytic) return analytic_expectation(p, x);
    const auto [pp, pm] = detection_probabilities(p, x);
    const CountRecord rec = sample_counts(pp, pm, shots_, rng_);
    if (p.circuit == Circuit::vqc) return expectation_vqc(rec);
    if (rec.vanished) ++vanished_;
    return expectation_nevqc(rec);
  }

 private:
  Backend backend_;
  std::uint64_t shots_;
  std::mt19937_64 rng_;
  std::uint64_t vanished_ = 0;
};

}  // namespace alqc
