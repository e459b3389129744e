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

#ifndef QST_HYPOTHESIS_HPP
#define QST_HYPOTHESIS_HPP

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "qst/estimation.hpp"
#include "qst/spectral_model.hpp"

namespace qst {

struct AndersonDarlingResult {
  double statistic = 0.0;
  double p_value = 1.0;
  /// Some F(x_i) hit 0 or 1 and was clamped to [1e-15, 1 - 1e-15].
  bool clamped = false;
};

/// Limiting null CDF Pr(A^2 <= z) for a fully specified model
/// (Marsaglia & Marsaglia 2004 approximation, |error| < 2e-6).
double anderson_darling_null_cdf(double z);

/// A^2 = -n - (1/n) sum (2i-1)[ln u_i + ln(1 - u_{n+1-i})] with u = F(sorted
/// sample) and the asymptotic upper-tail P-value. The caller is responsible
/// for checking that the sample lies inside the model support.
AndersonDarlingResult anderson_darling(std::span<const double> sample,
                                       const std::function<double(double)>& model_cdf);

/// Center and radius of the noise semicircle when the top `r` eigenvalues
/// are attributed to the signal. Only the r largest eigenvalues are read;
/// `descending` must list them largest first.
SemicircleModel<double> rank_candidate(std::span<const double> descending, int n,
                                       double events_per_setting, int r);

struct RankTestRow {
  int rank = 0;
  double center = 0.0;
  double radius = 0.0;
  double statistic = 0.0;
  double p_value = 0.0;
  double p_eff = 0.0;
  bool support_violation = false;
  bool clamped = false;
  /// Eigenvalues above min(lambda) + 2 R_r.
  int screened_signal_count = 0;
};

struct RankTestReport {
  int n = 0;
  double events_per_setting = 0.0;
  double significance = 0.05;
  std::vector<RankTestRow> rows;
  /// Smallest rank with P_eff >= significance and a positive center;
  /// empty when no candidate qualifies.
  std::optional<int> chosen_rank;

  const RankTestRow* chosen_row() const {
    return chosen_rank ? &rows[static_cast<std::size_t>(*chosen_rank)] : nullptr;
  }
};

/// Tests ranks 0..max_rank against semicircle noise on the smallest
/// 2^n - r eigenvalues. At least five eigenvalues are always tested, so
/// registers below three qubits are refused.
RankTestReport estimate_rank(const Spectrum& spectrum, int n, double events_per_setting,
                             double significance = 0.05, int max_rank = 5);

/// Keeps the top-r eigenpairs, floors the rest at the fitted center, and
/// renormalizes. Throws std::invalid_argument when no rank was accepted.
DensityMatrix reconstruct_physical_estimate(const EigenSystem& system, const RankTestReport& report);

/// Fraction of rows whose smallest eigenvalue is strictly negative.
/// Kolmogorov distance sup |F_n - F| between the empirical CDF of `sample`
/// and `model_cdf`.
double sup_cdf_distance(std::span<const double> sample, const std::function<double(double)>& model_cdf);

double unphysical_fraction(const SpectrumRows& rows);
double unphysical_fraction(std::span<const Spectrum> spectra);

}  // namespace qst

#endif  // QST_HYPOTHESIS_HPP
