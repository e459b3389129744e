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

// Tomographically complete scheme with 4^n product projectors onto
// {|0>, |1>, |+>, |+i>}^{(x)n}. Projector index v is base 4 with qubit 0
// most significant; digit 0..3 selects |0>, |1>, |+>, |+i>.

#ifndef QST_COMPLETE_SCHEME_HPP
#define QST_COMPLETE_SCHEME_HPP

#include <cstdint>
#include <memory>
#include <span>

#include "qst/estimation.hpp"
#include "qst/types.hpp"

namespace qst {

/// Transfer matrix B[v, mu] = tr(sigma_mu P_v) / 2^n and its inverse.
///
/// B factorizes as the n-fold Kronecker power of the single-qubit 4x4
/// block, so the frame stores the block and its inverse and applies
/// either one by mode products in O(n 4^n). Dense forms are materialized
/// on request.
class CompleteSchemeFrame {
 public:
  explicit CompleteSchemeFrame(int n);

  int qubits() const { return n_; }
  std::size_t size() const { return num_paulis(n_); }

  const Eigen::Matrix4d& block() const { return block_; }
  const Eigen::Matrix4d& block_inverse() const { return block_inverse_; }

  /// Projector kets of a single qubit, in digit order.
  static Eigen::Vector2cd single_qubit_ket(int digit);
  Eigen::VectorXcd projector_ket(std::size_t v) const;

  /// Probabilities p_v = sum_mu B[v, mu] T_mu.
  Eigen::VectorXd apply(const Eigen::VectorXd& correlations) const;
  /// Correlations T = B^-1 f.
  Eigen::VectorXd apply_inverse(const Eigen::VectorXd& probabilities) const;

  Eigen::MatrixXd transfer_matrix() const;
  Eigen::MatrixXd inverse_matrix() const;

 private:
  Eigen::VectorXd kronecker_apply(const Eigen::Matrix4d& factor, const Eigen::VectorXd& in) const;

  int n_;
  Eigen::Matrix4d block_;
  Eigen::Matrix4d block_inverse_;
};

/// Shared, lazily built frame for `n` qubits.
std::shared_ptr<const CompleteSchemeFrame> build_complete_frame(int n);

/// Exact projector probabilities tr(rho P_v).
Eigen::VectorXd complete_probabilities(const CompleteSchemeFrame& frame, const DensityMatrix& rho);

/// Linear estimate from per-projector counts at flux `flux` (expected count
/// of projector v is flux * p_v). T_0 is renormalized to 1 by rescaling the
/// whole correlation vector.
DensityMatrix estimate_complete(const CompleteSchemeFrame& frame, std::span<const std::int64_t> counts,
                                double flux);

/// Per-projector flux for a total event budget: N_total / 2^n, which makes
/// the expected number of events summed over all 4^n projectors equal
/// N_total for the maximally mixed state.
double complete_scheme_flux(int n, double total_counts);

}  // namespace qst

#endif  // QST_COMPLETE_SCHEME_HPP
