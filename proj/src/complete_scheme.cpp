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

#include "qst/complete_scheme.hpp"

#include <array>
#include <cmath>
#include <map>
#include <mutex>

#include "qst/pauli.hpp"

namespace qst {

CompleteSchemeFrame::CompleteSchemeFrame(int n) : n_(n) {
  require_qubits(n, kMaxDenseQubits);
  // block_(v, mu) = tr(sigma_mu |e_v><e_v|) / 2 for the single-qubit kets.
  for (int v = 0; v < 4; ++v) {
    const Eigen::Vector2cd e = single_qubit_ket(v);
    const Eigen::Matrix2cd proj = e * e.adjoint();
    for (int mu = 0; mu < 4; ++mu) {
      const auto sigma = pauli_matrix(PauliString({static_cast<std::uint8_t>(mu)}));
      block_(v, mu) = (sigma * proj).trace().real() / 2.0;
    }
  }
  Eigen::FullPivLU<Eigen::Matrix4d> lu(block_);
  if (!lu.isInvertible()) throw Error("complete-scheme transfer block is singular");
  block_inverse_ = lu.inverse();
  if ((block_ * block_inverse_ - Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff() > 1e-12) {
    throw Error("complete-scheme transfer block inverse failed verification");
  }
}

Eigen::Vector2cd CompleteSchemeFrame::single_qubit_ket(int digit) {
  const double h = 1.0 / std::sqrt(2.0);
  switch (digit) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {h, h};
    case 3: return {h, std::complex<double>(0.0, h)};
    default: throw std::invalid_argument("projector digit must be in {0,1,2,3}");
  }
}

Eigen::VectorXcd CompleteSchemeFrame::projector_ket(std::size_t v) const {
  if (v >= size()) throw std::out_of_range("projector index out of range");
  Eigen::VectorXcd ket = Eigen::VectorXcd::Ones(1);
  for (int k = 0; k < n_; ++k) {
    const int digit = static_cast<int>(v / ipow(4, n_ - 1 - k) % 4);
    const Eigen::Vector2cd e = single_qubit_ket(digit);
    Eigen::VectorXcd next(ket.size() * 2);
    for (Eigen::Index i = 0; i < ket.size(); ++i) {
      next(2 * i) = ket(i) * e(0);
      next(2 * i + 1) = ket(i) * e(1);
    }
    ket = std::move(next);
  }
  return ket;
}

Eigen::VectorXd CompleteSchemeFrame::kronecker_apply(const Eigen::Matrix4d& factor,
                                                     const Eigen::VectorXd& in) const {
  if (static_cast<std::size_t>(in.size()) != size()) throw DimensionError("vector length is not 4^n");
  Eigen::VectorXd out = in;
  const auto total = static_cast<Eigen::Index>(size());
  for (int k = 0; k < n_; ++k) {
    const auto stride = static_cast<Eigen::Index>(ipow(4, n_ - 1 - k));
    for (Eigen::Index base = 0; base < total; base += 4 * stride) {
      for (Eigen::Index off = 0; off < stride; ++off) {
        Eigen::Vector4d v;
        for (int d = 0; d < 4; ++d) v(d) = out(base + off + d * stride);
        const Eigen::Vector4d w = factor * v;
        for (int d = 0; d < 4; ++d) out(base + off + d * stride) = w(d);
      }
    }
  }
  return out;
}

Eigen::VectorXd CompleteSchemeFrame::apply(const Eigen::VectorXd& correlations) const {
  return kronecker_apply(block_, correlations);
}

Eigen::VectorXd CompleteSchemeFrame::apply_inverse(const Eigen::VectorXd& probabilities) const {
  return kronecker_apply(block_inverse_, probabilities);
}

Eigen::MatrixXd CompleteSchemeFrame::transfer_matrix() const {
  Eigen::MatrixXd out = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(size()),
                                                  static_cast<Eigen::Index>(size()));
  for (Eigen::Index c = 0; c < out.cols(); ++c) out.col(c) = apply(out.col(c));
  return out;
}

Eigen::MatrixXd CompleteSchemeFrame::inverse_matrix() const {
  Eigen::MatrixXd out = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(size()),
                                                  static_cast<Eigen::Index>(size()));
  for (Eigen::Index c = 0; c < out.cols(); ++c) out.col(c) = apply_inverse(out.col(c));
  return out;
}

std::shared_ptr<const CompleteSchemeFrame> build_complete_frame(int n) {
  static std::mutex mutex;
  static std::map<int, std::shared_ptr<const CompleteSchemeFrame>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[n];
  if (!slot) slot = std::make_shared<const CompleteSchemeFrame>(n);
  return slot;
}

Eigen::VectorXd complete_probabilities(const CompleteSchemeFrame& frame, const DensityMatrix& rho) {
  if (static_cast<std::size_t>(rho.rows()) != dimension(frame.qubits())) {
    throw DimensionError("density matrix does not match frame");
  }
  Eigen::VectorXd p = frame.apply(exact_correlations(rho).values);
  for (Eigen::Index v = 0; v < p.size(); ++v) {
    if (p(v) < -1e-12) throw std::domain_error("negative projector probability");
    if (p(v) < 0) p(v) = 0;
  }
  return p;
}

DensityMatrix estimate_complete(const CompleteSchemeFrame& frame, std::span<const std::int64_t> counts,
                                double flux) {
  if (counts.size() != frame.size()) throw DimensionError("expected 4^n projector counts");
  if (!(flux > 0.0)) throw std::invalid_argument("flux must be positive");
  Eigen::VectorXd f(static_cast<Eigen::Index>(counts.size()));
  for (std::size_t v = 0; v < counts.size(); ++v) {
    f(static_cast<Eigen::Index>(v)) = static_cast<double>(counts[v]) / flux;
  }
  Eigen::VectorXd t = frame.apply_inverse(f);
  if (!(t(0) > 0.0)) throw EmptySettingError("complete-scheme data carry no events");
  t /= t(0);
  t(0) = 1.0;
  return reconstruct_linear(t);
}

double complete_scheme_flux(int n, double total_counts) {
  if (!(total_counts > 0.0)) throw std::invalid_argument("total counts must be positive");
  return total_counts / static_cast<double>(dimension(n));
}

}  // namespace qst
