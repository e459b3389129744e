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

#include "qst/state.hpp"

#include <array>
#include <bit>
#include <random>
#include <utility>

namespace qst {
namespace {

constexpr std::array<std::pair<StateKind, std::string_view>, 6> kKindNames{{
    {StateKind::kWhiteNoise, "white_noise"},
    {StateKind::kPurePlusNoise, "pure_plus_noise"},
    {StateKind::kRankPlusNoise, "rank_r_plus_noise"},
    {StateKind::kGhzPlusNoise, "ghz_plus_noise"},
    {StateKind::kDickePlusNoise, "dicke_plus_noise"},
    {StateKind::kExplicitMatrix, "explicit_matrix"},
}};

constexpr std::uint64_t kDefaultStateSeed = 1;

int dicke_excitations(const StateSpec& spec) { return spec.k.value_or(spec.n / 2); }

/// Columns form an orthonormal set of `r` Haar-random vectors.
ComplexMatrix<double> haar_frame(std::size_t dim, int r, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  ComplexMatrix<double> g(dim, r);
  for (Eigen::Index c = 0; c < g.cols(); ++c) {
    for (Eigen::Index i = 0; i < g.rows(); ++i) g(i, c) = {normal(rng), normal(rng)};
  }
  Eigen::HouseholderQR<ComplexMatrix<double>> qr(g);
  return qr.householderQ() * ComplexMatrix<double>::Identity(dim, r);
}

DensityMatrix signal_part(const StateSpec& spec) {
  const std::size_t dim = dimension(spec.n);
  const auto d = static_cast<Eigen::Index>(dim);
  switch (spec.kind) {
    case StateKind::kPurePlusNoise:
    case StateKind::kRankPlusNoise: {
      const int r = spec.kind == StateKind::kPurePlusNoise ? 1 : spec.r;
      const auto frame = haar_frame(dim, r, spec.seed.value_or(kDefaultStateSeed));
      return frame * frame.adjoint() / static_cast<double>(r);
    }
    case StateKind::kGhzPlusNoise: {
      DensityMatrix s = DensityMatrix::Zero(d, d);
      s(0, 0) = s(0, d - 1) = s(d - 1, 0) = s(d - 1, d - 1) = 0.5;
      return s;
    }
    case StateKind::kDickePlusNoise: {
      const int k = dicke_excitations(spec);
      Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(d);
      for (std::size_t b = 0; b < dim; ++b) {
        if (std::popcount(b) == k) psi(static_cast<Eigen::Index>(b)) = 1.0;
      }
      psi.normalize();
      return psi * psi.adjoint();
    }
    default:
      return DensityMatrix::Zero(d, d);
  }
}

}  // namespace

std::string_view to_string(StateKind kind) {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

StateKind state_kind_from_string(std::string_view name) {
  for (const auto& [k, n] : kKindNames) {
    if (n == name) return k;
  }
  throw std::invalid_argument("unknown state kind '" + std::string(name) + "'");
}

int signal_rank(const StateSpec& spec) {
  switch (spec.kind) {
    case StateKind::kPurePlusNoise:
    case StateKind::kGhzPlusNoise:
    case StateKind::kDickePlusNoise:
      return 1;
    case StateKind::kRankPlusNoise:
      return spec.r;
    default:
      return 0;
  }
}

void validate(const StateSpec& spec) {
  require_qubits(spec.n, kMaxDenseQubits);
  if (!(spec.q >= 0.0 && spec.q <= 1.0)) throw std::invalid_argument("q must lie in [0, 1]");
  const auto dim = static_cast<int>(dimension(spec.n));
  if (spec.r < 0 || spec.r > dim) {
    throw std::invalid_argument("rank r must lie in [0, 2^n]");
  }
  switch (spec.kind) {
    case StateKind::kWhiteNoise:
      if (spec.q != 0.0) throw std::invalid_argument("white noise requires q = 0");
      break;
    case StateKind::kRankPlusNoise:
      if (spec.r == 0 && spec.q != 0.0) {
        throw std::invalid_argument("rank 0 signal requires q = 0");
      }
      break;
    case StateKind::kDickePlusNoise: {
      const int k = dicke_excitations(spec);
      if (k < 0 || k > spec.n) throw std::invalid_argument("Dicke excitations k must lie in [0, n]");
      break;
    }
    case StateKind::kExplicitMatrix:
      if (!spec.matrix) throw std::invalid_argument("explicit_matrix requires a matrix");
      if (static_cast<int>(spec.matrix->rows()) != dim) {
        throw DimensionError("explicit matrix size does not match n");
      }
      break;
    default:
      break;
  }
}

DensityMatrix build_state(const StateSpec& spec) {
  validate(spec);
  const auto d = static_cast<Eigen::Index>(dimension(spec.n));
  if (spec.kind == StateKind::kExplicitMatrix) {
    const DensityMatrix& m = *spec.matrix;
    check_density_matrix(m);
    Eigen::SelfAdjointEigenSolver<DensityMatrix> es(m, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-12) {
      throw std::domain_error("explicit matrix is not positive semidefinite");
    }
    return m;
  }
  DensityMatrix rho = DensityMatrix::Identity(d, d) * ((1.0 - spec.q) / static_cast<double>(d));
  if (spec.q > 0.0 && signal_rank(spec) > 0) rho += spec.q * signal_part(spec);
  // Exact Hermitian symmetry; the Haar outer product is only Hermitian to roundoff.
  rho = (0.5 * (rho + rho.adjoint())).eval();
  return rho;
}

void to_json(nlohmann::json& j, const StateSpec& spec) {
  j = nlohmann::json{{"kind", to_string(spec.kind)}, {"n", spec.n}, {"q", spec.q}, {"r", spec.r}};
  j["k"] = spec.k ? nlohmann::json(*spec.k) : nlohmann::json(nullptr);
  j["seed"] = spec.seed ? nlohmann::json(*spec.seed) : nlohmann::json(nullptr);
  if (spec.matrix) {
    const auto& m = *spec.matrix;
    nlohmann::json re = nlohmann::json::array(), im = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      nlohmann::json rr = nlohmann::json::array(), ii = nlohmann::json::array();
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        rr.push_back(m(i, c).real());
        ii.push_back(m(i, c).imag());
      }
      re.push_back(std::move(rr));
      im.push_back(std::move(ii));
    }
    j["matrix"] = {{"real", re}, {"imag", im}};
  }
}

void from_json(const nlohmann::json& j, StateSpec& spec) {
  spec = StateSpec{};
  spec.kind = state_kind_from_string(j.at("kind").get<std::string>());
  spec.n = j.at("n").get<int>();
  spec.q = j.value("q", 0.0);
  spec.r = j.value("r", 0);
  if (j.contains("k") && !j["k"].is_null()) spec.k = j["k"].get<int>();
  if (j.contains("seed") && !j["seed"].is_null()) spec.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("matrix") && !j["matrix"].is_null()) {
    const auto& re = j["matrix"].at("real");
    const auto& im = j["matrix"].at("imag");
    const auto d = static_cast<Eigen::Index>(re.size());
    DensityMatrix m(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
      if (static_cast<Eigen::Index>(re[i].size()) != d || static_cast<Eigen::Index>(im[i].size()) != d) {
        throw DimensionError("explicit matrix must be square");
      }
      for (Eigen::Index c = 0; c < d; ++c) {
        m(i, c) = {re[i][c].get<double>(), im[i][c].get<double>()};
      }
    }
    spec.matrix = std::move(m);
  }
}

}  // namespace qst
