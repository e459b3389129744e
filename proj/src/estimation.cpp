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

#include "qst/estimation.hpp"

#include <string>

namespace qst {
namespace {

/// In place: y[m] = sum_o x[o] (-1)^{|o & m|}.
void walsh_hadamard(Eigen::Ref<Eigen::VectorXd> x) {
  const Eigen::Index size = x.size();
  for (Eigen::Index h = 1; h < size; h *= 2) {
    for (Eigen::Index i = 0; i < size; i += 2 * h) {
      for (Eigen::Index j = i; j < i + h; ++j) {
        const double a = x(j);
        const double b = x(j + h);
        x(j) = a + b;
        x(j + h) = a - b;
      }
    }
  }
}

}  // namespace

CorrelationTensor estimate_correlations(std::span<const CountRecord> records, int n) {
  require_qubits(n, kMaxDenseQubits);
  const std::size_t settings = num_settings(n);
  const std::size_t dim = dimension(n);
  if (records.size() != settings) {
    throw std::invalid_argument("expected " + std::to_string(settings) + " count records, got " +
                                std::to_string(records.size()));
  }
  std::vector<const CountRecord*> by_setting(settings, nullptr);
  for (const auto& rec : records) {
    if (rec.setting >= settings || rec.counts.size() != dim) {
      throw DimensionError("count record does not match qubit count");
    }
    if (by_setting[rec.setting] != nullptr) {
      throw std::invalid_argument("duplicate record for setting " + std::to_string(rec.setting));
    }
    by_setting[rec.setting] = &rec;
  }

  const std::size_t paulis = num_paulis(n);
  Eigen::VectorXd sums = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(paulis));
  std::vector<int> hits(paulis, 0);
  std::vector<std::size_t> mu_of_mask(dim);
  std::vector<std::size_t> digit_weight(n);
  for (int k = 0; k < n; ++k) digit_weight[k] = ipow(4, n - 1 - k);

  for (std::size_t s = 0; s < settings; ++s) {
    const CountRecord* rec = by_setting[s];
    if (rec == nullptr) throw std::invalid_argument("missing record for setting " + std::to_string(s));
    Eigen::VectorXd e = frequencies(*rec);
    walsh_hadamard(e);

    const Setting setting = Setting::from_index(n, s);
    mu_of_mask[0] = 0;
    for (std::size_t m = 1; m < dim; ++m) {
      const int low = std::countr_zero(m);
      const int qubit = n - 1 - low;
      mu_of_mask[m] = mu_of_mask[m & (m - 1)] + setting[qubit] * digit_weight[qubit];
    }
    for (std::size_t m = 0; m < dim; ++m) {
      sums(static_cast<Eigen::Index>(mu_of_mask[m])) += e(static_cast<Eigen::Index>(m));
      ++hits[mu_of_mask[m]];
    }
  }

  CorrelationTensor t;
  t.n = n;
  t.values.resize(static_cast<Eigen::Index>(paulis));
  t.multiplicity = std::move(hits);
  for (std::size_t mu = 0; mu < paulis; ++mu) {
    t.values(static_cast<Eigen::Index>(mu)) = sums(static_cast<Eigen::Index>(mu)) / t.multiplicity[mu];
  }
  t.values(0) = 1.0;
  return t;
}

CorrelationTensor exact_correlations(const DensityMatrix& rho) {
  const int n = qubits_for_dimension(static_cast<std::size_t>(rho.rows()));
  CorrelationTensor t;
  t.n = n;
  const std::size_t paulis = num_paulis(n);
  t.values.resize(static_cast<Eigen::Index>(paulis));
  for (std::size_t mu = 0; mu < paulis; ++mu) {
    t.values(static_cast<Eigen::Index>(mu)) = pauli_expectation(rho, PauliString::from_index(n, mu));
  }
  return t;
}

namespace {

void check_hermitian_input(const DensityMatrix& rho) {
  if (rho.rows() != rho.cols() || rho.rows() == 0) throw DimensionError("matrix must be square");
  if (hermiticity_defect(rho) > 1e-10) throw std::domain_error("matrix is not Hermitian");
}

void check_trace(const Spectrum& s) {
  if (std::abs(s.eigenvalues.sum() - s.trace) > 1e-9) {
    throw Error("eigenvalue sum deviates from the trace");
  }
}

}  // namespace

EigenSystem eigensystem_of(const DensityMatrix& rho) {
  check_hermitian_input(rho);
  Eigen::SelfAdjointEigenSolver<DensityMatrix> es(rho, Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success) throw Error("Hermitian eigensolver did not converge");
  EigenSystem out;
  out.spectrum.eigenvalues = es.eigenvalues();
  out.spectrum.trace = rho.trace().real();
  out.vectors = es.eigenvectors();
  const DensityMatrix rebuilt =
      out.vectors * out.spectrum.eigenvalues.cast<std::complex<double>>().asDiagonal() * out.vectors.adjoint();
  if ((rebuilt - rho).cwiseAbs().maxCoeff() > 1e-9) {
    throw Error("eigendecomposition residual exceeds 1e-9");
  }
  check_trace(out.spectrum);
  return out;
}

Spectrum spectrum_of(const DensityMatrix& rho) { return eigensystem_of(rho).spectrum; }

Spectrum eigenvalues_of(const DensityMatrix& rho) {
  check_hermitian_input(rho);
  Eigen::SelfAdjointEigenSolver<DensityMatrix> es(rho, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw Error("Hermitian eigensolver did not converge");
  Spectrum s{es.eigenvalues(), rho.trace().real()};
  check_trace(s);
  return s;
}

}  // namespace qst
