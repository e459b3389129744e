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

#ifndef QST_TYPES_HPP
#define QST_TYPES_HPP

#include <complex>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qst {

template <typename Real>
using ComplexMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Real>
using RealVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

/// Hermitian unit-trace matrix. Positivity is not enforced: linear
/// estimates are routinely unphysical.
using DensityMatrix = ComplexMatrix<double>;

/// One spectrum per row.
using SpectrumRows = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Largest register simulated with dense matrices.
inline constexpr int kMaxDenseQubits = 6;
/// Largest register accepted by closed-form predictions.
inline constexpr int kMaxAnalyticQubits = 10;

inline constexpr double kHermitianTolerance = 1e-12;
inline constexpr double kTraceTolerance = 1e-12;

constexpr std::size_t dimension(int n) { return std::size_t{1} << n; }

constexpr std::size_t ipow(std::size_t base, int exp) {
  std::size_t out = 1;
  for (int i = 0; i < exp; ++i) out *= base;
  return out;
}

constexpr std::size_t num_paulis(int n) { return ipow(4, n); }
constexpr std::size_t num_settings(int n) { return ipow(3, n); }

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A setting in Poisson mode recorded no events.
class EmptySettingError : public Error {
 public:
  using Error::Error;
};

class DivergenceError : public Error {
 public:
  using Error::Error;
};

class OverflowError : public Error {
 public:
  using Error::Error;
};

inline void require_qubits(int n, int max_qubits) {
  if (n < 1 || n > max_qubits) {
    throw std::invalid_argument("qubit count " + std::to_string(n) + " outside [1, " +
                                std::to_string(max_qubits) + "]");
  }
}

/// Largest entrywise |A - A^dagger|.
template <typename Derived>
typename Eigen::NumTraits<typename Derived::Scalar>::Real hermiticity_defect(
    const Eigen::MatrixBase<Derived>& a) {
  if (a.rows() == 0) return 0;
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

/// Throws unless `rho` is square with power-of-two size, Hermitian and unit trace.
template <typename Derived>
void check_density_matrix(const Eigen::MatrixBase<Derived>& rho,
                          double hermitian_tol = kHermitianTolerance,
                          double trace_tol = kTraceTolerance) {
  const auto dim = static_cast<std::size_t>(rho.rows());
  if (rho.rows() != rho.cols() || dim == 0 || (dim & (dim - 1)) != 0) {
    throw DimensionError("density matrix must be square with power-of-two size");
  }
  if (hermiticity_defect(rho) > hermitian_tol) {
    throw std::domain_error("density matrix is not Hermitian");
  }
  if (std::abs(rho.trace() - typename Derived::Scalar(1)) > trace_tol) {
    throw std::domain_error("density matrix trace differs from 1");
  }
}

inline int qubits_for_dimension(std::size_t dim) {
  int n = 0;
  while ((std::size_t{1} << n) < dim) ++n;
  if ((std::size_t{1} << n) != dim) throw DimensionError("dimension is not a power of two");
  return n;
}

}  // namespace qst

#endif  // QST_TYPES_HPP
