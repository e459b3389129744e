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

// Closed-form spectral laws for linear tomography estimates.
//
// Everything here is a pure function of its arguments and is templated on
// the real type so the same expressions can be evaluated in long double
// when checking rounding-sensitive thresholds.

#ifndef QST_SPECTRAL_MODEL_HPP
#define QST_SPECTRAL_MODEL_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "qst/types.hpp"

namespace qst {

template <typename Real = double>
struct SemicircleModel {
  Real center;
  Real radius;
};

template <typename Real = double>
struct LaplaceModel {
  Real center;
  Real alpha;
};

namespace detail {

template <typename Real>
void check_rank(int n, int r) {
  require_qubits(n, kMaxAnalyticQubits);
  if (r < 0 || static_cast<std::size_t>(r) >= dimension(n)) {
    throw std::invalid_argument("rank r must lie in [0, 2^n)");
  }
}

}  // namespace detail

/// (1 - q) / (2^n - r): the mean of the 2^n - r noise eigenvalues.
template <typename Real = double>
Real semicircle_center(int n, Real q, int r = 0) {
  detail::check_rank<Real>(n, r);
  if (!(q >= 0 && q <= 1)) throw std::invalid_argument("q must lie in [0, 1]");
  return (Real(1) - q) / (static_cast<Real>(dimension(n)) - static_cast<Real>(r));
}

/// 2 sqrt((10^n - 1) / 12^n) sqrt(1 - r 2^-n) / sqrt(N).
template <typename Real = double>
Real semicircle_radius(int n, Real events_per_setting, int r = 0) {
  using std::pow;
  using std::sqrt;
  detail::check_rank<Real>(n, r);
  if (!(events_per_setting >= 1)) throw std::invalid_argument("N must be >= 1");
  const Real second_moment = (pow(Real(10), n) - Real(1)) / pow(Real(12), n);
  const Real rank_factor = Real(1) - static_cast<Real>(r) / static_cast<Real>(dimension(n));
  return Real(2) * sqrt(second_moment * rank_factor / events_per_setting);
}

/// Width 2 R_r of the interval holding the noise eigenvalues.
template <typename Real = double>
Real semicircle_width(int n, Real events_per_setting, int r = 0) {
  return Real(2) * semicircle_radius(n, events_per_setting, r);
}

template <typename Real>
Real semicircle_pdf(const SemicircleModel<Real>& m, Real lambda) {
  const Real x = lambda - m.center;
  if (std::abs(x) >= m.radius) return 0;
  return Real(2) / (std::numbers::pi_v<Real> * m.radius * m.radius) *
         std::sqrt(m.radius * m.radius - x * x);
}

template <typename Real>
Real semicircle_cdf(const SemicircleModel<Real>& m, Real lambda) {
  const Real x = lambda - m.center;
  if (x <= -m.radius) return 0;
  if (x >= m.radius) return 1;
  const Real pi = std::numbers::pi_v<Real>;
  const Real s = x / m.radius;
  return Real(0.5) + x * std::sqrt(Real(1) - s * s) / (pi * m.radius) + std::asin(s) / pi;
}

/// Inverse of semicircle_cdf by bisection.
template <typename Real>
Real semicircle_quantile(const SemicircleModel<Real>& m, Real p) {
  if (!(p >= 0 && p <= 1)) throw std::invalid_argument("quantile level must lie in [0, 1]");
  Real lo = m.center - m.radius, hi = m.center + m.radius;
  for (int i = 0; i < 200 && hi - lo > std::numeric_limits<Real>::epsilon() * m.radius; ++i) {
    const Real mid = (lo + hi) / 2;
    (semicircle_cdf(m, mid) < p ? lo : hi) = mid;
  }
  return (lo + hi) / 2;
}

/// Smallest integer N for which the noise radius R_0 does not exceed the
/// rank-one center (1 - q) / (2^n - 1), i.e.
/// N >= 4 (10^n - 1) / 12^n ((2^n - 1) / (1 - q))^2.
/// For large n this approaches 4 (5/6)^n ((2^n - 1) / (1 - q))^2.
/// Throws DivergenceError at q = 1.
std::int64_t min_counts(int n, double q);

/// Probability that 2^n - 1 independent semicircle draws are all
/// nonnegative; 1 whenever center >= radius.
template <typename Real>
Real physicality_probability(const SemicircleModel<Real>& m, int n) {
  require_qubits(n, kMaxAnalyticQubits);
  if (m.center >= m.radius) return 1;
  const Real inside = Real(1) - semicircle_cdf(m, Real(0));
  return std::pow(inside, static_cast<Real>(dimension(n) - 1));
}

/// Single-qubit eigenvalue density for white noise,
/// g(l) = C exp(-(1-2l)^2 N / 2) (1-2l)^2 with C = 2 N^{3/2} / sqrt(2 pi).
/// Semicircle with a prescribed variance: R = 2 sqrt(variance).
template <typename Real = double>
SemicircleModel<Real> moment_matched_semicircle(Real center, Real variance) {
  if (!(variance > 0)) throw std::invalid_argument("variance must be positive");
  return {center, Real(2) * std::sqrt(variance)};
}

template <typename Real = double>
class SingleQubitDensity {
 public:
  explicit SingleQubitDensity(Real events_per_setting) : n_(events_per_setting) {
    if (!(n_ >= 1)) throw std::invalid_argument("N must be >= 1");
    norm_ = Real(2) * std::pow(n_, Real(1.5)) / std::sqrt(Real(2) * std::numbers::pi_v<Real>);
  }

  Real normalization() const { return norm_; }
  Real events() const { return n_; }

  Real operator()(Real lambda) const {
    const Real x = Real(1) - Real(2) * lambda;
    return norm_ * std::exp(-x * x * n_ / Real(2)) * x * x;
  }

  /// With u = sqrt(N)(1 - 2 lambda): u phi(u) + (1 - Phi(u)).
  Real cdf(Real lambda) const {
    const Real u = std::sqrt(n_) * (Real(1) - Real(2) * lambda);
    const Real phi = std::exp(-u * u / Real(2)) / std::sqrt(Real(2) * std::numbers::pi_v<Real>);
    return u * phi + std::erfc(u / std::sqrt(Real(2))) / Real(2);
  }

  /// Interval outside which the density is negligible.
  Real support_half_width() const { return Real(10) / std::sqrt(n_); }

 private:
  Real n_;
  Real norm_;
};

template <typename Real = double>
SingleQubitDensity<Real> single_qubit_density(Real events_per_setting) {
  return SingleQubitDensity<Real>(events_per_setting);
}

/// Laplace law of the complete scheme: centre 2^-n, alpha = sqrt(2 N_total / 4^n).
template <typename Real = double>
LaplaceModel<Real> laplace_model(int n, Real total_counts) {
  require_qubits(n, kMaxAnalyticQubits);
  if (!(total_counts >= 1)) throw std::invalid_argument("N_total must be >= 1");
  return {Real(1) / static_cast<Real>(dimension(n)),
          std::sqrt(Real(2) * total_counts / static_cast<Real>(num_paulis(n)))};
}

template <typename Real>
Real laplace_pdf(const LaplaceModel<Real>& m, Real lambda) {
  return m.alpha / Real(2) * std::exp(-m.alpha * std::abs(lambda - m.center));
}

template <typename Real>
Real laplace_cdf(const LaplaceModel<Real>& m, Real lambda) {
  const Real x = lambda - m.center;
  if (x < 0) return std::exp(m.alpha * x) / Real(2);
  return Real(1) - std::exp(-m.alpha * x) / Real(2);
}

/// Second central moment 2 / alpha^2.
template <typename Real>
Real laplace_variance(const LaplaceModel<Real>& m) {
  return Real(2) / (m.alpha * m.alpha);
}

/// Catalan number C_k in exact integer arithmetic; throws OverflowError
/// once the value leaves uint64.
std::uint64_t catalan(int k);

/// Central moment of order k: 0 for odd k, C_{k/2} (R/2)^k for even k.
template <typename Real>
Real semicircle_moment(const SemicircleModel<Real>& m, int k) {
  if (k < 1) throw std::invalid_argument("moment order must be >= 1");
  if (k % 2 == 1) return 0;
  return static_cast<Real>(catalan(k / 2)) * std::pow(m.radius / Real(2), k);
}

}  // namespace qst

#endif  // QST_SPECTRAL_MODEL_HPP
