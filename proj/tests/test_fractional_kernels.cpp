// Copyright 2026 The fnslab Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy at
// http://www.apache.org/licenses/LICENSE-2.0

#include <gtest/gtest.h>

#include <cmath>

#include "fns/error.hpp"
#include "fns/fractional_kernels.hpp"
#include "fns/norms.hpp"
#include "oracles/kernel_bruteforce.hpp"
#include "oracles/support.hpp"

namespace fns {
namespace {

TEST(Semigroup, IdentityAtTimeZero) {
  const GridSpec g{2, 16, 2.0 * M_PI};
  const SpectralField f = testing::random_field(g, 2, 1, true);
  const SpectralField out = semigroup_apply({1.6, 0.0}, f);
  EXPECT_EQ(testing::max_coeff_diff(out, f), 0.0);
  EXPECT_TRUE(out.divergence_free());
}

TEST(Semigroup, ClassicalHandValue) {
  const GridSpec g{2, 16, 2.0 * M_PI};
  SpectralField f = SpectralField::scalar(g);
  const std::vector<int> k{2, 0};
  const std::size_t m = wave_table(g)->flat_index(k);
  f.at(0, m) = 1.0;
  const SpectralField out = semigroup_apply({2.0, 0.25}, f);
  EXPECT_NEAR(out.at(0, m).real(), 0.36787944117144233, 1e-15);
}

TEST(Semigroup, ContractsL2Norm) {
  const GridSpec g{2, 16, 2.0 * M_PI};
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ua(1.01, 2.0), ut(0.0, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    const SpectralField f = testing::random_field(g, 1, 100 + trial);
    const SemigroupMultiplier m{ua(rng), ut(rng)};
    EXPECT_LE(norm_l2(semigroup_apply(m, f)), norm_l2(f) * (1.0 + 1e-15));
  }
}

TEST(Semigroup, MonotoneAndRejectsNegativeTime) {
  const SemigroupMultiplier a{1.5, 0.3}, b{1.5, 0.6};
  for (double k2 : {0.5, 1.0, 4.0, 9.0}) {
    EXPECT_GT(a.at_k2(k2), b.at_k2(k2));
    EXPECT_GT(a.at_k2(k2), a.at_k2(k2 + 1.0));
    EXPECT_LE(a.at_k2(k2), 1.0);
  }
  EXPECT_EQ(a.at_k2(0.0), 1.0);
  const SpectralField f = SpectralField::scalar({2, 8, 1.0});
  EXPECT_THROW(semigroup_apply({1.5, -0.1}, f), DomainError);
  EXPECT_THROW(semigroup_apply({0.9, 0.1}, f), DomainError);
}

TEST(KernelDistance, VanishesAtClassicalOrder) {
  const auto d = kernel_distance_hms(2.0, 2.0, 1.0, 3);
  EXPECT_EQ(d.value, 0.0);
  EXPECT_EQ(grad_kernel_distance_hms(2.0, 3.0, 1.0, 3).value, 0.0);
}

TEST(KernelDistance, MatchesBruteForceOracle) {
  const auto lib = kernel_distance_hms(1.9, 2.0, 1.0, 3);
  const auto ref = oracle::brute_distance(1.9, 2.0, 1.0, 3, false);
  EXPECT_NEAR(lib.value / ref.value, 1.0, 1e-6);
  EXPECT_LE(std::abs(lib.value - ref.value), lib.err_bound + 1e-9 * ref.value);
  EXPECT_NEAR(lib.t_star / ref.t_star, 1.0, 1e-2);
}

TEST(KernelDistance, GradientMatchesBruteForceOracle) {
  const auto lib = grad_kernel_distance_hms(1.9, 3.0, 1.0, 3);
  const auto ref = oracle::brute_distance(1.9, 3.0, 1.0, 3, true);
  EXPECT_NEAR(lib.value / ref.value, 1.0, 1e-6);
}

TEST(KernelDistance, TwoDimensionalOracle) {
  const auto lib = kernel_distance_hms(1.95, 1.5, 0.5, 2);
  const auto ref = oracle::brute_distance(1.95, 1.5, 0.5, 2, false, 400000, 2000, 4000);
  EXPECT_NEAR(lib.value / ref.value, 1.0, 1e-6);
}

TEST(KernelDistance, RatioTracksOrderGap) {
  const double v19 = kernel_distance_hms(1.9, 2.0, 1.0, 3).value;
  const double v199 = kernel_distance_hms(1.99, 2.0, 1.0, 3).value;
  EXPECT_NEAR(v199 / v19, 0.1, 0.025);
}

TEST(KernelDistance, DecreasingInAlphaWithPositiveMaximizer) {
  double prev = INFINITY;
  for (double a : {1.3, 1.5, 1.7, 1.9, 1.99}) {
    const auto d = kernel_distance_hms(a, 2.0, 1.0, 3);
    EXPECT_LT(d.value, prev);
    EXPECT_GT(d.t_star, 0.0);
    EXPECT_LE(d.t_star, 1.0);
    prev = d.value;
  }
}

TEST(KernelDistance, GuardsDomain) {
  EXPECT_THROW(kernel_distance_hms(1.0, 2.0, 1.0, 3), DomainError);
  EXPECT_THROW(kernel_distance_hms(2.5, 2.0, 1.0, 3), DomainError);
  EXPECT_THROW(kernel_distance_hms(1.9, 1.5, 1.0, 3), DomainError);
  EXPECT_THROW(kernel_distance_hms(1.9, 1.0, 1.0, 2), DomainError);
  EXPECT_THROW(kernel_distance_hms(1.9, 2.0, 0.0, 3), DomainError);
  // The gradient integrand needs one more derivative of decay.
  EXPECT_THROW(grad_kernel_distance_hms(1.9, 2.0, 1.0, 3), DomainError);
  EXPECT_NO_THROW(grad_kernel_distance_hms(1.9, 2.6, 1.0, 3));
}

TEST(KernelDistance, GradientSlopeNearOne) {
  std::vector<double> x, y;
  for (double a : {1.9, 1.95, 1.99}) {
    x.push_back(std::log(2.0 - a));
    y.push_back(std::log(grad_kernel_distance_hms(a, 3.0, 1.0, 3).value));
  }
  const double slope = (y[2] - y[0]) / (x[2] - x[0]);
  EXPECT_NEAR(slope, 1.0, 0.05);
}

TEST(KernelDistance, SupIsAttainedBeforeLongHorizons) {
  // The maximizer sits near t = 0.01 for s = 2 in 3D, so larger horizons
  // leave the sup unchanged and the fitted C scales like 1 / T.
  const auto a = certify_two_sided_bound(2.0, 1.0, {1.9, 1.95, 1.99});
  const auto b = certify_two_sided_bound(2.0, 2.0, {1.9, 1.95, 1.99});
  for (std::size_t i = 0; i < a.distances.size(); ++i) {
    EXPECT_NEAR(b.distances[i] / a.distances[i], 1.0, 1e-9);
  }
  EXPECT_NEAR(b.fitted_upper_C * 2.0 / a.fitted_upper_C, 1.0, 1e-9);
}

TEST(Certify, SyntheticLinearDistances) {
  KernelDistanceReport r;
  r.horizon = 2.0;
  r.alphas = {1.9, 1.95, 1.99};
  for (double a : r.alphas) r.distances.push_back(0.3 * (2.0 - a));
  fit_two_sided_constants(r);
  EXPECT_NEAR(r.slope, 1.0, 1e-12);
  EXPECT_NEAR(r.fitted_upper_C, 0.15, 1e-12);
  EXPECT_NEAR(r.fitted_lower_c, 0.3, 1e-12);
  EXPECT_TRUE(r.passed);
}

TEST(Certify, RejectsClassicalOrderInGrid) {
  EXPECT_THROW(certify_two_sided_bound(2.0, 1.0, {1.9, 2.0}), DomainError);
}

TEST(Certify, SlopeAcrossIndicesAndHorizons) {
  for (double s : {1.6, 2.0, 3.0}) {
    for (double T : {0.5, 1.0, 2.0}) {
      const auto r = certify_two_sided_bound(s, T, {1.85, 1.9, 1.95, 1.99, 1.999});
      EXPECT_GE(r.slope, 0.9) << "s " << s << " T " << T;
      EXPECT_LE(r.slope, 1.1) << "s " << s << " T " << T;
      EXPECT_GT(r.fitted_lower_c, 0.0);
      EXPECT_LE(r.fitted_lower_c, 2.0 * r.fitted_upper_C);
      EXPECT_TRUE(r.passed);
    }
  }
}

TEST(GradKernelL1, GaussianConstant) {
  const double c0 = std::tgamma(2.0) / std::tgamma(1.5);  // 2 / sqrt(pi)
  for (double t : {0.01, 0.1, 1.0}) {
    EXPECT_NEAR(grad_kernel_l1_check(2.0, t, 3, 64) / c0, 1.0, 1e-2) << "t " << t;
  }
}

TEST(GradKernelL1, SelfSimilarForFractionalOrder) {
  const double r0 = grad_kernel_l1_check(1.5, 0.01, 3, 64);
  const double r1 = grad_kernel_l1_check(1.5, 1.0, 3, 64);
  EXPECT_GE(r0 / r1, 0.5);
  EXPECT_LE(r0 / r1, 2.0);
  EXPECT_LE(r0, 10.0);
  EXPECT_THROW(grad_kernel_l1_check(1.5, 0.0), DomainError);
}

}  // namespace
}  // namespace fns
