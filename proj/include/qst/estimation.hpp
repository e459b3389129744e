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

#ifndef QST_ESTIMATION_HPP
#define QST_ESTIMATION_HPP

#include <bit>
#include <span>
#include <vector>

#include "qst/pauli.hpp"
#include "qst/sampling.hpp"
#include "qst/types.hpp"

namespace qst {

/// Expectation values of all 4^n Pauli strings, indexed by PauliString::index().
struct CorrelationTensor {
  int n = 0;
  Eigen::VectorXd values;
  /// Number of settings averaged into each entry (3^j); empty when the
  /// tensor did not come from the overcomplete scheme.
  std::vector<int> multiplicity;

  double operator[](const PauliString& mu) const {
    return values(static_cast<Eigen::Index>(mu.index()));
  }
};

/// Eigenvalues sorted ascending.
struct Spectrum {
  Eigen::VectorXd eigenvalues;
  double trace = 0.0;

  double min() const { return eigenvalues(0); }
  double max() const { return eigenvalues(eigenvalues.size() - 1); }
};

/// Eigenvalues ascending with matching eigenvector columns.
struct EigenSystem {
  Spectrum spectrum;
  DensityMatrix vectors;
};

/// T_mu averaged without weights over the 3^j settings compatible with mu.
/// Expects exactly one record per setting (any order); T_0 is set to 1.
CorrelationTensor estimate_correlations(std::span<const CountRecord> records, int n);

/// Exact tr(rho sigma_mu) for every mu.
CorrelationTensor exact_correlations(const DensityMatrix& rho);

/// 2^-n sum_mu T_mu sigma_mu from a length-4^n coefficient vector.
template <typename Derived>
ComplexMatrix<typename Derived::Scalar> reconstruct_linear(const Eigen::MatrixBase<Derived>& values) {
  using Real = typename Derived::Scalar;
  using C = std::complex<Real>;
  const auto count = static_cast<std::size_t>(values.size());
  int n = 0;
  while (num_paulis(n) < count) ++n;
  if (num_paulis(n) != count || n == 0) throw DimensionError("tensor length is not 4^n");

  const std::size_t dim = dimension(n);
  const Real scale = Real(1) / static_cast<Real>(dim);
  ComplexMatrix<Real> rho = ComplexMatrix<Real>::Zero(dim, dim);
  for (std::size_t mu = 0; mu < count; ++mu) {
    const Real t = values(static_cast<Eigen::Index>(mu));
    if (t == Real(0)) continue;
    std::uint64_t x = 0, z = 0;
    int ny = 0;
    std::size_t rest = mu;
    for (int bit = 0; bit < n; ++bit) {
      const auto label = rest % 4;
      rest /= 4;
      if (label == 1 || label == 2) x |= std::uint64_t{1} << bit;
      if (label == 2 || label == 3) z |= std::uint64_t{1} << bit;
      ny += (label == 2);
    }
    const C coeff = detail::i_power<Real>(ny) * (t * scale);
    for (std::size_t b = 0; b < dim; ++b) {
      const auto row = static_cast<Eigen::Index>(b ^ x);
      const auto col = static_cast<Eigen::Index>(b);
      if (std::popcount(b & z) & 1) {
        rho(row, col) -= coeff;
      } else {
        rho(row, col) += coeff;
      }
    }
  }
  return rho;
}

inline DensityMatrix reconstruct_linear(const CorrelationTensor& t) {
  if (static_cast<std::size_t>(t.values.size()) != num_paulis(t.n)) {
    throw DimensionError("correlation tensor is incomplete");
  }
  return reconstruct_linear(t.values);
}

/// Full Hermitian eigendecomposition; verifies ||rho - V L V^dagger||_max <= 1e-9.
EigenSystem eigensystem_of(const DensityMatrix& rho);

/// Ascending eigenvalues with the reconstruction residual check.
Spectrum spectrum_of(const DensityMatrix& rho);

/// Eigenvalues only, checked against the trace. Used on ensemble hot paths.
Spectrum eigenvalues_of(const DensityMatrix& rho);

}  // namespace qst

#endif  // QST_ESTIMATION_HPP
