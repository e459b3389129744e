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

#include "qst/hypothesis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qst {
namespace {

constexpr double kLogClamp = 1e-15;
constexpr int kMinTestSample = 5;

}  // namespace

double anderson_darling_null_cdf(double z) {
  if (!(z > 0.0)) return 0.0;
  if (z < 2.0) {
    return std::exp(-1.2337141 / z) / std::sqrt(z) *
           (2.00012 + (0.247105 - (0.0649821 - (0.0347962 - (0.011672 - 0.00168691 * z) * z) * z) * z) * z);
  }
  return std::exp(-std::exp(1.0776 - (2.30695 - (0.43424 - (0.082433 - (0.008056 - 0.0003146 * z) * z) * z) * z) * z));
}

AndersonDarlingResult anderson_darling(std::span<const double> sample,
                                       const std::function<double(double)>& model_cdf) {
  if (sample.empty()) throw std::invalid_argument("Anderson-Darling test needs a nonempty sample");
  std::vector<double> u(sample.begin(), sample.end());
  std::sort(u.begin(), u.end());
  AndersonDarlingResult out;
  for (double& v : u) {
    v = model_cdf(v);
    if (v < kLogClamp || v > 1.0 - kLogClamp) {
      out.clamped = true;
      v = std::clamp(v, kLogClamp, 1.0 - kLogClamp);
    }
  }
  const auto n = u.size();
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += static_cast<double>(2 * i + 1) * (std::log(u[i]) + std::log1p(-u[n - 1 - i]));
  }
  const double nd = static_cast<double>(n);
  out.statistic = -nd - acc / nd;
  out.p_value = std::clamp(1.0 - anderson_darling_null_cdf(out.statistic), 0.0, 1.0);
  return out;
}

SemicircleModel<double> rank_candidate(std::span<const double> descending, int n,
                                       double events_per_setting, int r) {
  if (r < 0 || static_cast<std::size_t>(r) > descending.size()) {
    throw std::invalid_argument("not enough eigenvalues for the requested rank");
  }
  const double signal = std::accumulate(descending.begin(), descending.begin() + r, 0.0);
  const double noise_count = static_cast<double>(dimension(n)) - r;
  return {(1.0 - signal) / noise_count, semicircle_radius(n, events_per_setting, r)};
}

RankTestReport estimate_rank(const Spectrum& spectrum, int n, double events_per_setting,
                             double significance, int max_rank) {
  require_qubits(n, kMaxAnalyticQubits);
  const std::size_t dim = dimension(n);
  if (static_cast<std::size_t>(spectrum.eigenvalues.size()) != dim) {
    throw DimensionError("spectrum must contain 2^n eigenvalues");
  }
  if (!(significance > 0.0 && significance < 1.0)) {
    throw std::invalid_argument("significance must lie in (0, 1)");
  }
  if (max_rank < 0) throw std::invalid_argument("max rank must be >= 0");
  if (dim < static_cast<std::size_t>(kMinTestSample)) {
    throw std::invalid_argument("rank test needs at least " + std::to_string(kMinTestSample) + " eigenvalues");
  }

  std::vector<double> ascending(spectrum.eigenvalues.data(), spectrum.eigenvalues.data() + dim);
  std::sort(ascending.begin(), ascending.end());
  std::vector<double> descending(ascending.rbegin(), ascending.rend());
  const int rank_limit = std::min<int>(max_rank, static_cast<int>(dim) - kMinTestSample);

  RankTestReport report;
  report.n = n;
  report.events_per_setting = events_per_setting;
  report.significance = significance;
  for (int r = 0; r <= rank_limit; ++r) {
    RankTestRow row;
    row.rank = r;
    const auto model = rank_candidate(descending, n, events_per_setting, r);
    row.center = model.center;
    row.radius = model.radius;
    const double threshold = ascending.front() + 2.0 * model.radius;
    row.screened_signal_count = static_cast<int>(
        std::count_if(ascending.begin(), ascending.end(), [&](double l) { return l > threshold; }));

    const std::span<const double> tested(ascending.data(), dim - static_cast<std::size_t>(r));
    row.support_violation = std::any_of(tested.begin(), tested.end(), [&](double l) {
      return l < model.center - model.radius || l > model.center + model.radius;
    });
    const auto ad = anderson_darling(tested, [&](double l) { return semicircle_cdf(model, l); });
    row.statistic = ad.statistic;
    row.p_value = ad.p_value;
    row.clamped = ad.clamped;
    row.p_eff = row.support_violation ? 0.0 : row.p_value;
    if (!report.chosen_rank && row.p_eff >= significance && row.center > 0.0) report.chosen_rank = r;
    report.rows.push_back(row);
  }
  return report;
}

DensityMatrix reconstruct_physical_estimate(const EigenSystem& system, const RankTestReport& report) {
  const RankTestRow* row = report.chosen_row();
  if (row == nullptr) throw std::invalid_argument("rank test accepted no candidate rank");
  const Eigen::Index dim = system.spectrum.eigenvalues.size();
  if (system.vectors.rows() != dim || system.vectors.cols() != dim) {
    throw DimensionError("eigenvectors do not match eigenvalues");
  }
  // Eigenvalues are ascending, so the signal occupies the last `rank` slots.
  Eigen::VectorXd values = system.spectrum.eigenvalues;
  const Eigen::Index noise = dim - row->rank;
  values.head(noise).setConstant(row->center);
  values /= values.sum();
  DensityMatrix rho = system.vectors * values.cast<std::complex<double>>().asDiagonal() * system.vectors.adjoint();
  return (0.5 * (rho + rho.adjoint())).eval();
}

double sup_cdf_distance(std::span<const double> sample, const std::function<double(double)>& model_cdf) {
  if (sample.empty()) throw std::invalid_argument("empty sample");
  std::vector<double> x(sample.begin(), sample.end());
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = model_cdf(x[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

double unphysical_fraction(const SpectrumRows& rows) {
  if (rows.rows() == 0) throw std::invalid_argument("empty ensemble");
  Eigen::Index bad = 0;
  for (Eigen::Index i = 0; i < rows.rows(); ++i) bad += rows.row(i).minCoeff() < 0.0;
  return static_cast<double>(bad) / static_cast<double>(rows.rows());
}

double unphysical_fraction(std::span<const Spectrum> spectra) {
  if (spectra.empty()) throw std::invalid_argument("empty ensemble");
  const auto bad = std::count_if(spectra.begin(), spectra.end(),
                                 [](const Spectrum& s) { return s.eigenvalues.minCoeff() < 0.0; });
  return static_cast<double>(bad) / static_cast<double>(spectra.size());
}

}  // namespace qst
