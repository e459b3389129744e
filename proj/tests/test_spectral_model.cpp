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

#include <cmath>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qst/spectral_model.hpp"

namespace qst {
namespace {

TEST(SemicircleCenter, Values) {
  EXPECT_DOUBLE_EQ(semicircle_center(6, 0.0, 0), 0.015625);
  EXPECT_NEAR(semicircle_center(6, 0.8, 1), 0.0031746, 1e-7);
  EXPECT_DOUBLE_EQ(semicircle_center(1, 0.0, 0), 0.5);
  EXPECT_THROW(semicircle_center(2, 0.0, 4), std::invalid_argument);
  EXPECT_THROW(semicircle_center(2, 1.2, 0), std::invalid_argument);
}

TEST(SemicircleRadius, PublishedValues) {
  EXPECT_NEAR(semicircle_radius(6, 100.0, 0), 0.115741, 1e-6);
  EXPECT_NEAR(semicircle_radius(6, 230.0, 0), 0.076317, 1e-6);
  EXPECT_NEAR(semicircle_radius(6, 230.0, 3), 0.074507, 1e-6);
  EXPECT_DOUBLE_EQ(semicircle_width(6, 230.0, 3), 2 * semicircle_radius(6, 230.0, 3));
}

TEST(SemicircleRadius, ExactVarianceForm) {
  // The radius is twice the root of (10^n - 1) / (12^n N), not the (5/6)^n shortcut.
  EXPECT_DOUBLE_EQ(semicircle_radius(1, 1.0, 0), 2 * std::sqrt(9.0 / 12.0));
  EXPECT_GT(std::abs(semicircle_radius(2, 1.0, 0) - 2 * std::sqrt(25.0 / 36.0)), 1e-3);
  EXPECT_THROW(semicircle_radius(2, 0.5, 0), std::invalid_argument);
}

TEST(SemicircleRadius, LongDoubleScalar) {
  const long double r = semicircle_radius<long double>(6, 100.0L, 0);
  EXPECT_NEAR(static_cast<double>(r), semicircle_radius(6, 100.0, 0), 1e-15);
}

TEST(SemicirclePdfCdf, Landmarks) {
  const SemicircleModel<double> m{0.3, 0.2};
  EXPECT_DOUBLE_EQ(semicircle_cdf(m, 0.3), 0.5);
  EXPECT_DOUBLE_EQ(semicircle_cdf(m, 0.5), 1.0);
  EXPECT_DOUBLE_EQ(semicircle_cdf(m, 0.1), 0.0);
  EXPECT_EQ(semicircle_pdf(m, 0.55), 0.0);
  EXPECT_EQ(semicircle_pdf(m, 0.05), 0.0);
}

TEST(SemicirclePdfCdf, CdfIsIntegralOfPdf) {
  const SemicircleModel<double> m{-0.1, 0.7};
  for (double x : {-0.7, -0.4, -0.1, 0.2, 0.55}) {
    const double integral = oracle::integrate([&](double l) { return semicircle_pdf(m, l); }, m.center - m.radius, x);
    EXPECT_NEAR(semicircle_cdf(m, x), integral, 1e-8) << x;
  }
}

TEST(SemicircleMoments, MatchQuadrature) {
  const SemicircleModel<double> m{0.0, 1.3};
  for (int k = 1; k <= 8; ++k) {
    const double q = oracle::integrate(
        [&](double l) { return semicircle_pdf(m, l) * std::pow(l - m.center, k); }, -m.radius, m.radius, 1e-14);
    const double exact = semicircle_moment(m, k);
    if (k % 2 == 1) {
      EXPECT_EQ(exact, 0.0);
      EXPECT_NEAR(q, 0.0, 1e-9);
    } else {
      EXPECT_NEAR(q / exact, 1.0, 1e-6) << k;
    }
  }
  EXPECT_NEAR(semicircle_moment(m, 2), std::pow(1.3 / 2, 2), 1e-15);
}

TEST(SemicircleMoments, CatalanMultiples) {
  const SemicircleModel<double> m{0.5, 2.0};
  EXPECT_EQ(semicircle_moment(m, 3), 0.0);
  EXPECT_DOUBLE_EQ(semicircle_moment(m, 2), 1.0);
  EXPECT_DOUBLE_EQ(semicircle_moment(m, 6), 5.0);
  EXPECT_THROW(semicircle_moment(m, 0), std::invalid_argument);
}

TEST(SemicircleQuantile, InvertsCdf) {
  const SemicircleModel<double> m{0.01, 0.1};
  for (double p : {0.0, 0.01, 0.25, 0.5, 0.9, 1.0}) {
    EXPECT_NEAR(semicircle_cdf(m, semicircle_quantile(m, p)), p, 1e-12);
  }
}

TEST(Catalan, Sequence) {
  const std::vector<std::uint64_t> published = {1, 1, 2, 5, 14, 42};
  for (int k = 0; k < 6; ++k) EXPECT_EQ(catalan(k), published[static_cast<std::size_t>(k)]);
  for (int k = 0; k <= 35; ++k) EXPECT_EQ(catalan(k), oracle::catalan_binomial(k)) << k;
  EXPECT_THROW(catalan(40), OverflowError);
  EXPECT_THROW(catalan(-1), std::invalid_argument);
}

TEST(MinCounts, PublishedThreshold) {
  EXPECT_EQ(min_counts(6, 0.8), 132921);
  EXPECT_THROW(min_counts(6, 1.0), DivergenceError);
  EXPECT_THROW(min_counts(6, -0.1), std::invalid_argument);
}

TEST(MinCounts, SingleQubitFrozen) {
  // Oracle: 4 * (9/12) * (1 / 0.5)^2 = 12 exactly.
  EXPECT_EQ(min_counts(1, 0.5), 12);
}

TEST(MinCounts, Minimality) {
  for (int n : {2, 3, 4, 5, 6, 8}) {
    for (double q : {0.0, 0.3, 0.8, 0.95}) {
      const auto n0 = min_counts(n, q);
      const double c = semicircle_center(n, q, 1);
      EXPECT_LE(semicircle_radius(n, static_cast<double>(n0), 0), c * (1 + 1e-12)) << n << " " << q;
      if (n0 > 1) {
        EXPECT_GT(semicircle_radius(n, static_cast<double>(n0 - 1), 0), c) << n << " " << q;
      }
    }
  }
}

TEST(PhysicalityProbability, Examples) {
  EXPECT_EQ(physicality_probability(SemicircleModel<double>{0.2, 0.1}, 3), 1.0);
  EXPECT_NEAR(physicality_probability(SemicircleModel<double>{0.0, 0.1}, 2), 0.125, 1e-15);
}

TEST(PhysicalityProbability, MonotoneAndSaturatesAtThreshold) {
  const double c = semicircle_center(6, 0.8, 1);
  const auto n0 = min_counts(6, 0.8);
  double prev = 0.0;
  for (std::int64_t n = 20000; n <= 200000; n += 5000) {
    const double p = physicality_probability(SemicircleModel<double>{c, semicircle_radius(6, static_cast<double>(n), 0)}, 6);
    EXPECT_GE(p, prev);
    if (n >= n0) {
      EXPECT_EQ(p, 1.0);
    }
    prev = p;
  }
}

TEST(SingleQubitDensity, Shape) {
  const auto g = single_qubit_density(100.0);
  EXPECT_EQ(g(0.5), 0.0);
  for (double x : {0.01, 0.05, 0.13}) EXPECT_NEAR(g(0.5 + x) / g(0.5 - x), 1.0, 1e-12);
}

TEST(SingleQubitDensity, NormalizationMatchesQuadrature) {
  for (double n : {1.0, 10.0, 100.0, 5000.0}) {
    const auto g = single_qubit_density(n);
    const double h = g.support_half_width();
    // Unnormalized kernel integrated independently of the closed form.
    const double mass = oracle::integrate(
        [&](double l) {
          const double x = 1 - 2 * l;
          return std::exp(-x * x * n / 2) * x * x;
        },
        0.5 - h, 0.5 + h, 1e-16);
    EXPECT_NEAR(g.normalization() * mass, 1.0, 1e-8) << n;
    EXPECT_NEAR(oracle::integrate(g, 0.5 - h, 0.5 + h), 1.0, 1e-6);
  }
}

TEST(SingleQubitDensity, CdfMatchesQuadrature) {
  const auto g = single_qubit_density(100.0);
  const double lo = 0.5 - g.support_half_width();
  for (double x : {0.3, 0.42, 0.5, 0.61, 0.7}) {
    EXPECT_NEAR(g.cdf(x), oracle::integrate(g, lo, x), 1e-8) << x;
  }
  EXPECT_NEAR(g.cdf(0.5), 0.5, 1e-15);
}

TEST(Laplace, Parameters) {
  const auto m = laplace_model(6, 4e6);
  EXPECT_NEAR(m.alpha, 44.194, 1e-3);
  EXPECT_DOUBLE_EQ(m.center, 1.0 / 64);
  EXPECT_DOUBLE_EQ(laplace_model(1, 8.0).alpha, 2.0);
  EXPECT_NEAR(laplace_variance(m), 4096.0 / 4e6, 1e-15);
}

TEST(Laplace, DensityQuadrature) {
  const auto m = laplace_model(2, 50.0);
  const double w = 40 / m.alpha;
  const auto pdf = [&](double l) { return laplace_pdf(m, l); };
  // Split at the cusp so the quadrature sees smooth pieces.
  const double mass = oracle::integrate(pdf, m.center - w, m.center) + oracle::integrate(pdf, m.center, m.center + w);
  EXPECT_NEAR(mass, 1.0, 1e-8);
  const auto second = [&](double l) { return laplace_pdf(m, l) * (l - m.center) * (l - m.center); };
  const double m2 = oracle::integrate(second, m.center - w, m.center) + oracle::integrate(second, m.center, m.center + w);
  EXPECT_NEAR(m2 / laplace_variance(m), 1.0, 1e-6);
  EXPECT_NEAR(laplace_cdf(m, m.center + 0.1), oracle::integrate(pdf, m.center - w, m.center) +
                                                  oracle::integrate(pdf, m.center, m.center + 0.1), 1e-9);
}

TEST(MomentMatchedSemicircle, Radius) {
  const auto m = moment_matched_semicircle(0.1, 0.04);
  EXPECT_DOUBLE_EQ(m.radius, 0.4);
  EXPECT_DOUBLE_EQ(semicircle_moment(m, 2), 0.04);
}

}  // namespace
}  // namespace qst
