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

// Pauli strings, local measurement settings and outcomes.
//
// Conventions used throughout the library:
//   * qubit 0 is the most significant bit of a computational basis index;
//   * label 0 is the identity, 1/2/3 are X/Y/Z;
//   * the +1 eigenvectors are |+> = (|0>+|1>)/sqrt2, |+i> = (|0>+i|1>)/sqrt2
//     and |0>; the -1 eigenvectors are |->, |-i> and |1>;
//   * outcome index bit k (MSB first) is 0 for +1 and 1 for -1, so outcomes
//     are enumerated lexicographically with +1 before -1 and the all-Z
//     setting reads the computational basis directly.

#ifndef QST_PAULI_HPP
#define QST_PAULI_HPP

#include <bit>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qst/types.hpp"

namespace qst {

class PauliString {
 public:
  PauliString() = default;
  explicit PauliString(std::vector<std::uint8_t> labels) : labels_(std::move(labels)) {
    for (auto l : labels_) {
      if (l > 3) throw std::invalid_argument("Pauli label must be in {0,1,2,3}");
    }
  }

  static PauliString identity(int n) { return PauliString(std::vector<std::uint8_t>(n, 0)); }

  /// Base-4 index, qubit 0 most significant.
  static PauliString from_index(int n, std::size_t index) {
    std::vector<std::uint8_t> labels(n);
    for (int k = n - 1; k >= 0; --k) {
      labels[k] = static_cast<std::uint8_t>(index % 4);
      index /= 4;
    }
    return PauliString(std::move(labels));
  }

  std::size_t index() const {
    std::size_t idx = 0;
    for (auto l : labels_) idx = idx * 4 + l;
    return idx;
  }

  int size() const { return static_cast<int>(labels_.size()); }
  std::uint8_t operator[](int k) const { return labels_[k]; }
  const std::vector<std::uint8_t>& labels() const { return labels_; }

  /// Number of identity factors.
  int identity_count() const {
    int j = 0;
    for (auto l : labels_) j += (l == 0);
    return j;
  }

  std::uint64_t x_mask() const { return mask_if([](int l) { return l == 1 || l == 2; }); }
  std::uint64_t z_mask() const { return mask_if([](int l) { return l == 2 || l == 3; }); }
  /// Qubits carrying a non-identity factor.
  std::uint64_t support_mask() const { return mask_if([](int l) { return l != 0; }); }
  int y_count() const {
    int c = 0;
    for (auto l : labels_) c += (l == 2);
    return c;
  }

  friend bool operator==(const PauliString&, const PauliString&) = default;

 private:
  template <typename Pred>
  std::uint64_t mask_if(Pred pred) const {
    std::uint64_t m = 0;
    const int n = size();
    for (int k = 0; k < n; ++k) {
      if (pred(labels_[k])) m |= std::uint64_t{1} << (n - 1 - k);
    }
    return m;
  }

  std::vector<std::uint8_t> labels_;
};

/// A full local basis choice: one of X/Y/Z per qubit.
class Setting {
 public:
  Setting() = default;
  explicit Setting(std::vector<std::uint8_t> directions) : directions_(std::move(directions)) {
    for (auto d : directions_) {
      if (d < 1 || d > 3) throw std::invalid_argument("setting direction must be in {1,2,3}");
    }
  }

  /// Base-3 index over directions-1, qubit 0 most significant.
  static Setting from_index(int n, std::size_t index) {
    std::vector<std::uint8_t> dirs(n);
    for (int k = n - 1; k >= 0; --k) {
      dirs[k] = static_cast<std::uint8_t>(index % 3 + 1);
      index /= 3;
    }
    return Setting(std::move(dirs));
  }

  std::size_t index() const {
    std::size_t idx = 0;
    for (auto d : directions_) idx = idx * 3 + (d - 1);
    return idx;
  }

  int size() const { return static_cast<int>(directions_.size()); }
  std::uint8_t operator[](int k) const { return directions_[k]; }
  const std::vector<std::uint8_t>& directions() const { return directions_; }

  /// True when every non-identity factor of `mu` matches this setting.
  bool supports(const PauliString& mu) const {
    if (mu.size() != size()) return false;
    for (int k = 0; k < size(); ++k) {
      if (mu[k] != 0 && mu[k] != directions_[k]) return false;
    }
    return true;
  }

  /// The Pauli string measured on the qubits in `mask` (bit n-1-k for qubit k).
  PauliString restricted_to(std::uint64_t mask) const {
    const int n = size();
    std::vector<std::uint8_t> labels(n, 0);
    for (int k = 0; k < n; ++k) {
      if (mask >> (n - 1 - k) & 1) labels[k] = directions_[k];
    }
    return PauliString(std::move(labels));
  }

  friend bool operator==(const Setting&, const Setting&) = default;

 private:
  std::vector<std::uint8_t> directions_;
};

/// One +/-1 result per qubit; see the ordering convention above.
class Outcome {
 public:
  Outcome(int n, std::size_t index) : n_(n), index_(index) {}

  std::size_t index() const { return index_; }
  int size() const { return n_; }
  int sign(int k) const { return (index_ >> (n_ - 1 - k) & 1) ? -1 : +1; }

  /// Product of the signs on the qubits in `mask`.
  int parity(std::uint64_t mask) const { return (std::popcount(index_ & mask) & 1) ? -1 : +1; }

  std::vector<int> signs() const {
    std::vector<int> s(n_);
    for (int k = 0; k < n_; ++k) s[k] = sign(k);
    return s;
  }

 private:
  int n_;
  std::size_t index_;
};

namespace detail {

/// i^k for integer k.
template <typename Real>
std::complex<Real> i_power(int k) {
  switch (k & 3) {
    case 0: return {1, 0};
    case 1: return {0, 1};
    case 2: return {-1, 0};
    default: return {0, -1};
  }
}

/// Rows are <e_+| and <e_-| of the given direction.
template <typename Real>
Eigen::Matrix<std::complex<Real>, 2, 2> basis_change(int direction) {
  using C = std::complex<Real>;
  const Real h = Real(1) / std::sqrt(Real(2));
  Eigen::Matrix<C, 2, 2> u;
  switch (direction) {
    case 1: u << C(h), C(h), C(h), C(-h); break;
    case 2: u << C(h), C(0, -h), C(h), C(0, h); break;
    case 3: u << C(1), C(0), C(0), C(1); break;
    default: throw std::invalid_argument("direction must be in {1,2,3}");
  }
  return u;
}

}  // namespace detail

/// tr(rho sigma_mu). Throws DimensionError on size mismatch and
/// std::domain_error if the result has an imaginary part above 1e-10.
template <typename Derived>
typename Eigen::NumTraits<typename Derived::Scalar>::Real pauli_expectation(
    const Eigen::MatrixBase<Derived>& rho, const PauliString& mu) {
  using Real = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
  using C = std::complex<Real>;
  const std::size_t dim = dimension(mu.size());
  if (static_cast<std::size_t>(rho.rows()) != dim || rho.cols() != rho.rows()) {
    throw DimensionError("density matrix size does not match Pauli string length");
  }
  const std::uint64_t x = mu.x_mask();
  const std::uint64_t z = mu.z_mask();
  C acc(0);
  for (std::size_t b = 0; b < dim; ++b) {
    const C entry = rho(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(b ^ x));
    if (std::popcount(b & z) & 1) {
      acc -= entry;
    } else {
      acc += entry;
    }
  }
  acc *= detail::i_power<Real>(mu.y_count());
  if (std::abs(acc.imag()) > Real(1e-10)) {
    throw std::domain_error("Pauli expectation has a non-negligible imaginary part");
  }
  return acc.real();
}

/// Dense sigma_mu.
template <typename Real = double>
ComplexMatrix<Real> pauli_matrix(const PauliString& mu) {
  const std::size_t dim = dimension(mu.size());
  const std::uint64_t x = mu.x_mask();
  const std::uint64_t z = mu.z_mask();
  const auto phase = detail::i_power<Real>(mu.y_count());
  ComplexMatrix<Real> out = ComplexMatrix<Real>::Zero(dim, dim);
  for (std::size_t b = 0; b < dim; ++b) {
    out(static_cast<Eigen::Index>(b ^ x), static_cast<Eigen::Index>(b)) =
        (std::popcount(b & z) & 1) ? -phase : phase;
  }
  return out;
}

/// Exact outcome distribution of `setting` on `rho`, computed from the
/// diagonal of U rho U^dagger with U the tensor product of local basis
/// changes. Entries in [-1e-12, 0) are clamped to zero and the vector is
/// renormalized; anything more negative means `rho` is not a state.
template <typename Derived>
RealVector<typename Eigen::NumTraits<typename Derived::Scalar>::Real> outcome_probabilities(
    const Eigen::MatrixBase<Derived>& rho, const Setting& setting) {
  using Real = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
  using C = std::complex<Real>;
  const int n = setting.size();
  const std::size_t dim = dimension(n);
  if (static_cast<std::size_t>(rho.rows()) != dim || rho.cols() != rho.rows()) {
    throw DimensionError("density matrix size does not match setting length");
  }
  ComplexMatrix<Real> m = rho;
  const auto d = static_cast<Eigen::Index>(dim);
  for (int k = 0; k < n; ++k) {
    const auto u = detail::basis_change<Real>(setting[k]);
    const std::size_t bit = std::size_t{1} << (n - 1 - k);
    for (std::size_t a = 0; a < dim; ++a) {
      if (a & bit) continue;
      const auto a0 = static_cast<Eigen::Index>(a);
      const auto a1 = static_cast<Eigen::Index>(a | bit);
      for (Eigen::Index c = 0; c < d; ++c) {
        const C v0 = m(a0, c);
        const C v1 = m(a1, c);
        m(a0, c) = u(0, 0) * v0 + u(0, 1) * v1;
        m(a1, c) = u(1, 0) * v0 + u(1, 1) * v1;
      }
      for (Eigen::Index r = 0; r < d; ++r) {
        const C v0 = m(r, a0);
        const C v1 = m(r, a1);
        m(r, a0) = v0 * std::conj(u(0, 0)) + v1 * std::conj(u(0, 1));
        m(r, a1) = v0 * std::conj(u(1, 0)) + v1 * std::conj(u(1, 1));
      }
    }
  }
  RealVector<Real> p(d);
  for (Eigen::Index r = 0; r < d; ++r) {
    Real v = m(r, r).real();
    if (v < 0) {
      if (v < Real(-1e-12)) throw std::domain_error("negative outcome probability");
      v = 0;
    }
    p(r) = v;
  }
  const Real total = p.sum();
  if (!(total > 0)) throw std::domain_error("outcome probabilities sum to zero");
  p /= total;
  return p;
}

}  // namespace qst

#endif  // QST_PAULI_HPP
