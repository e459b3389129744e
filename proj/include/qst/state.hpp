// Copyright 2026 The qst Authors
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

#ifndef QST_STATE_HPP
#define QST_STATE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "qst/types.hpp"

namespace qst {

enum class StateKind {
  kWhiteNoise,
  kPurePlusNoise,
  kRankPlusNoise,
  kGhzPlusNoise,
  kDickePlusNoise,
  kExplicitMatrix,
};

std::string_view to_string(StateKind kind);
StateKind state_kind_from_string(std::string_view name);

/// Ground-truth state q * rho_signal + (1 - q) * I / 2^n.
struct StateSpec {
  StateKind kind = StateKind::kWhiteNoise;
  int n = 1;
  double q = 0.0;
  /// Rank of the signal part; only read for kRankPlusNoise.
  int r = 0;
  /// Dicke excitation number; defaults to n / 2 when unset.
  std::optional<int> k;
  /// Seed for Haar-random signal states.
  std::optional<std::uint64_t> seed;
  /// Only for kExplicitMatrix.
  std::optional<DensityMatrix> matrix;

  static StateSpec white_noise(int n) { return make(StateKind::kWhiteNoise, n, 0.0, 0); }
  static StateSpec ghz(int n, double q) { return make(StateKind::kGhzPlusNoise, n, q, 1); }
  static StateSpec rank_mixture(int n, double q, int r, std::uint64_t seed) {
    StateSpec s = make(StateKind::kRankPlusNoise, n, q, r);
    s.seed = seed;
    return s;
  }

 private:
  static StateSpec make(StateKind kind, int n, double q, int r) {
    StateSpec s;
    s.kind = kind;
    s.n = n;
    s.q = q;
    s.r = r;
    return s;
  }
};

/// Rank of the signal component (0 for white noise and explicit matrices).
int signal_rank(const StateSpec& spec);

/// Throws std::invalid_argument describing the first violated constraint.
void validate(const StateSpec& spec);

/// Positive semidefinite, unit-trace matrix for the spec. Rank-r signals are
/// equal mixtures of r Haar-random orthonormal vectors, obtained by
/// orthonormalizing a complex standard-normal matrix seeded from `spec.seed`.
DensityMatrix build_state(const StateSpec& spec);

void to_json(nlohmann::json& j, const StateSpec& spec);
void from_json(const nlohmann::json& j, StateSpec& spec);

}  // namespace qst

#endif  // QST_STATE_HPP
