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

#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>
#include <stdexcept>
#include <string>

namespace alqc {

inline constexpr const char* kVersion = "0.1.0";

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kQuarterPi = std::numbers::pi / 4.0;

/// Class label of a data item. The arithmetic value is +1 / -1.
enum class Label : int { minus = -1, plus = 1 };

inline constexpr double value(Label y) { return static_cast<double>(y); }

inline constexpr Label label_from_sign(double z) { return z >= 0.0 ? Label::plus : Label::minus; }

inline std::string to_string(Label y) { return y == Label::plus ? "+1" : "-1"; }

/// Thrown for malformed user input (config files, CLI arguments, CSV).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Reduces an angle into [0, pi).
inline double wrap_pi(double x) {
  double r = std::fmod(x, kPi);
  if (r < 0.0) r += kPi;
  if (r >= kPi) r = 0.0;
  return r;
}

/// SplitMix64 finalizer.
inline constexpr std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Derives an independent stream seed from a parent seed and a path of
/// stream indices: s <- splitmix64(s ^ splitmix64(index + 1)) per index.
/// Every per-run and per-purpose generator in the library is seeded this way.
inline constexpr std::uint64_t derive_seed(std::uint64_t parent,
                                           std::initializer_list<std::uint64_t> path) {
  std::uint64_t s = splitmix64(parent);
  for (std::uint64_t index : path) s = splitmix64(s ^ splitmix64(index + 1));
  return s;
}

// Stream indices used with derive_seed on a run seed.
namespace stream {
inline constexpr std::uint64_t pool = 1;
inline constexpr std::uint64_t init = 2;
inline constexpr std::uint64_t al_seed_set = 3;
inline constexpr std::uint64_t shots = 4;
}  // namespace stream

}  // namespace alqc
