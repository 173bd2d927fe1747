// Copyright 2026 The fnslab Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy at
// http://www.apache.org/licenses/LICENSE-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <random>

#include "fns/error.hpp"
#include "fns/mild_solver.hpp"
#include "fns/norms.hpp"
#include "fns/presets.hpp"
#include "fns/spectral_ops.hpp"
#include "oracles/support.hpp"

namespace fns {
namespace {

PhysicalField sample(const GridSpec& g, int comps, const std::function<double(int, double, double, double)>& fn) {
  PhysicalField p(g, comps);
  for (int c = 0; c < comps; ++c) {
    auto v = p.component(c);
    for (std::size_t i = 0; i < p.points(); ++i) {
      const double x = p.coordinate(0, i), y = p.coordinate(1, i);
      const double z = g.dim == 3 ? p.coordinate(2, i) : 0.0;
      v[i] = fn(c, x, y, z);
    }
  }
  return p;
}

// Straightforward dyadic-cube oscillation, written with explicit index loops.
double bmo_oracle(const PhysicalField& f, int max_level) {
  const int n = f.grid().n;
  const int dim = f.grid().dim;
  auto at = [&](int c, int i, int j, int k) {
    const std::size_t idx = dim == 2 ? static_cast<std::size_t>(i) * n + j
                                     : (static_cast<std::size_t>(i) * n + j) * n + k;
    return f.component(c)[idx];
  };
  double best = 0.0;
  for (int c = 0; c < f.components(); ++c) {
    for (int level = 0; level <= max_level; ++level) {
      const int side = n >> level;
      const int cells = 1 << level;
      const int zc = dim == 3 ? cells : 1;
      const int zs = dim == 3 ? side : 1;
      for (int a = 0; a < cells; ++a) {
        for (int b = 0; b < cells; ++b) {
          for (int e = 0; e < zc; ++e) {
            double mean = 0.0;
            int count = 0;
            for (int i = a * side; i < (a + 1) * side; ++i)
              for (int j = b * side; j < (b + 1) * side; ++j)
                for (int k = e * zs; k < (e + 1) * zs; ++k) {
                  mean += at(c, i, j, k);
                  ++count;
                }
            mean /= count;
            double osc = 0.0;
            for (int i = a * side; i < (a + 1) * side; ++i)
              for (int j = b * side; j < (b + 1) * side; ++j)
                for (int k = e * zs; k < (e + 1) * zs; ++k) osc += std::abs(at(c, i, j, k) - mean);
            best = std::max(best, osc / count);
          }
        }
      }
    }
  }
  return best;
}

TEST(NormSpec, ParseAndName) {
  EXPECT_EQ(NormSpec::parse("sup").kind, NormKind::sup);
  EXPECT_EQ(NormSpec::parse("l2").kind, NormKind::l2);
  const NormSpec hs = NormSpec::parse("hs:2.5");
  EXPECT_EQ(hs.kind, NormKind::hs);
  EXPECT_DOUBLE_EQ(hs.s, 2.5);
  EXPECT_EQ(NormSpec::parse("hminus:1.5").kind, NormKind::hminus);
  EXPECT_EQ(NormSpec::parse("bmo").bmo_level, 4);
  EXPECT_EQ(NormSpec::parse("bmo:6").bmo_level, 6);
  const NormSpec lp = NormSpec::parse("lplq:2:4");
  EXPECT_EQ(lp.kind, NormKind::lplq);
  EXPECT_DOUBLE_EQ(lp.p, 2.0);
  EXPECT_DOUBLE_EQ(lp.q, 4.0);
  EXPECT_TRUE(std::isinf(NormSpec::parse("lplq:inf:6").p));
  EXPECT_EQ(NormSpec::parse(hs.name()).s, 2.5);
  for (const char* bad : {"", "linf", "hs:x", "hs:-1", "bmo:0", "lplq:2", "lplq:0.5:4",
                          "lplq:2:2", "hs:1:2"}) {
    EXPECT_THROW(NormSpec::parse(bad), DomainError) << bad;
  }
}

TEST(Norms, ConstantField) {
  const GridSpec g{2, 16, 2.0 * M_PI};
  const SpectralField f = SpectralField::from_physical(sample(g, 1, [](int, double, double, double) {
    return 3.0;
  }));
  EXPECT_NEAR(norm_sup(f), 3.0, 1e-14);
  EXPECT_NEAR(norm_l2(f), 3.0, 1e-14);
  EXPECT_NEAR(norm_hs(f, 2.0), 3.0, 1e-14);
  EXPECT_NEAR(norm_hminus(f, 2.0), 3.0, 1e-14);
  EXPECT_NEAR(norm_lq(f, 4.0), 3.0, 1e-14);
  EXPECT_NEAR(bmo_discrete(f, 3), 0.0, 1e-14);
}

TEST(Norms, SingleCosineMode) {
  const GridSpec g{2, 32, 2.0 * M_PI};
  const double A = 1.7;
  const int k = 3;
  const SpectralField f = SpectralField::from_physical(sample(g, 1, [&](int, double x, double, double) {
    return A * std::cos(k * x);
  }));
  const double l2 = A / std::sqrt(2.0);
  EXPECT_NEAR(norm_sup(f), A, 1e-13);
  EXPECT_NEAR(norm_l2(f), l2, 1e-13);
  EXPECT_NEAR(norm_hs(f, 1.5), l2 * std::pow(1.0 + k * k, 0.75), 1e-12);
  EXPECT_NEAR(norm_hminus(f, 1.5), l2 * std::pow(1.0 + k * k, -0.75), 1e-13);
  EXPECT_NEAR(norm_lq(f, 4.0), A * std::pow(3.0 / 8.0, 0.25), 1e-13);
}

TEST(Norms, VectorSupIsPointwiseMagnitude) {
  const GridSpec g{2, 16, 2.0 * M_PI};
  const SpectralField f = SpectralField::from_physical(sample(g, 2, [](int c, double x, double, double) {
    return c == 0 ? 3.0 * std::cos(x) : 4.0 * std::cos(x);
  }));
  EXPECT_NEAR(norm_sup(f), 5.0, 1e-13);
}

TEST(Norms, SobolevChainAndInterpolation) {
  const GridSpec g{3, 16, 2.0 * M_PI};
  for (int trial = 0; trial < 20; ++trial) {
    const SpectralField f = testing::random_field(g, 3, 300 + trial, true);
    const double l2 = norm_l2(f);
    EXPECT_LE(norm_hminus(f, 1.0), l2);
    EXPECT_LE(l2, norm_hs(f, 1.0));
    EXPECT_LE(norm_hs(f, 1.0), norm_hs(f, 2.0));
    // |f|_{H^1} <= |f|_{L^2}^{1/2} |f|_{H^2}^{1/2}
    EXPECT_LE(norm_hs(f, 1.0), std::sqrt(l2 * norm_hs(f, 2.0)) * (1.0 + 1e-14));
    EXPECT_LE(norm_l2(f), norm_sup(f) * (1.0 + 1e-14));
  }
}

TEST(Bmo, MatchesCubeLoopOracle) {
  for (int dim : {2, 3}) {
    const GridSpec g{dim, 16, 2.0 * M_PI};
    for (int trial = 0; trial < 5; ++trial) {
      const PhysicalField f = testing::random_field(g, dim, 500 + trial).to_physical();
      EXPECT_NEAR(bmo_discrete(f, 3), bmo_oracle(f, 3), 1e-13) << "dim " << dim;
    }
  }
}

TEST(Bmo, SineApproachesContinuumValue) {
  // Over dyadic cells of [0, 2 pi] the largest oscillation of sin x is the
  // whole period, mean |sin| = 2 / pi.
  const GridSpec g{2, 256, 2.0 * M_PI};
  const PhysicalField f = sample(g, 1, [](int, double x, double, double) { return std::sin(x); });
  EXPECT_NEAR(bmo_discrete(f, 4), 2.0 / M_PI, 1e-4);
}

TEST(Bmo, BoundedByTwiceCenteredSup) {
  const GridSpec g{2, 32, 2.0 * M_PI};
  for (int trial = 0; trial < 100; ++trial) {
    SpectralField f = testing::random_field(g, 1, 900 + trial);
    f.at(0, 0) = 0.0;
    EXPECT_LE(bmo_discrete(f, 4), 2.0 * norm_sup(f) * (1.0 + 1e-12));
  }
}

TEST(Bmo, RieszTransformOfBoundedDataStaysBounded) {
  const GridSpec g{2, 32, 2.0 * M_PI};
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const SpectralField f = testing::random_field(g, 1, 1200 + trial);
    for (int axis = 0; axis < 2; ++axis) {
      worst = std::max(worst, bmo_discrete(riesz_transform(f, axis), 4) / norm_sup(f));
    }
  }
  EXPECT_LE(worst, 10.0);
}

TEST(Bmo, Guards) {
  const SpectralField f = SpectralField::scalar({2, 16, 1.0});
  EXPECT_THROW(bmo_discrete(f, 0), DomainError);
  EXPECT_THROW(bmo_discrete(f, 5), DomainError);
  EXPECT_NO_THROW(bmo_discrete(f, 4));
}

SolveRecord fake_record(const GridSpec& g, const std::vector<double>& times,
                        const std::vector<double>& scales, const SpectralField& shape) {
  SolveRecord r;
  r.times = times;
  for (double s : scales) {
    r.velocity.push_back(s * shape);
    r.pressure.push_back(SpectralField::scalar(g));
  }
  return r;
}

TEST(TrajectoryNorm, SpatialKindsTakeTheMaximum) {
  const GridSpec g{2, 16, 2.0 * M_PI};
  const SpectralField shape = testing::random_field(g, 2, 8, true);
  const SolveRecord a = fake_record(g, {0.0, 0.1, 0.2}, {1.0, 3.0, 2.0}, shape);
  const SolveRecord b = fake_record(g, {0.0, 0.1, 0.2}, {0.0, 0.0, 0.0}, shape);
  EXPECT_NEAR(trajectory_norm(a, b, NormSpec::parse("sup")), 3.0 * norm_sup(shape), 1e-13);
  EXPECT_NEAR(trajectory_norm(a, b, NormSpec::parse("l2")), 3.0 * norm_l2(shape), 1e-13);
  EXPECT_NEAR(trajectory_norm(a, b, NormSpec::parse("lplq:inf:4")), 3.0 * norm_lq(shape, 4.0),
              1e-13);
  EXPECT_EQ(trajectory_norm(a, a, NormSpec::parse("bmo")), 0.0);
  EXPECT_EQ(trajectory_norm(a, b, NormSpec::parse("sup"), TrajectoryPart::pressure), 0.0);
  EXPECT_THROW(trajectory_norm(a, b, NormSpec::parse("sup"), TrajectoryPart::magnetic),
               DomainError);
}

TEST(TrajectoryNorm, TimeIntegralOfConstantProfile) {
  const GridSpec g{2, 16, 2.0 * M_PI};
  const SpectralField shape = testing::random_field(g, 2, 9, true);
  const double T = 0.3;
  const SolveRecord a = fake_record(g, {0.0, 0.1, 0.2, T}, {1.0, 1.0, 1.0, 1.0}, shape);
  const SolveRecord b = fake_record(g, {0.0, 0.1, 0.2, T}, {0.0, 0.0, 0.0, 0.0}, shape);
  const double v = norm_lq(shape, 4.0);
  for (double p : {1.0, 2.0, 4.0}) {
    NormSpec spec = NormSpec::parse("lplq:2:4");
    spec.p = p;
    EXPECT_NEAR(trajectory_norm(a, b, spec), v * std::pow(T, 1.0 / p), 1e-13) << "p " << p;
  }
}

TEST(TrajectoryNorm, TrapezoidOfLinearProfile) {
  const GridSpec g{2, 16, 2.0 * M_PI};
  const SpectralField shape = testing::random_field(g, 1, 10);
  const SolveRecord a = fake_record(g, {0.0, 0.5, 1.0}, {0.0, 1.0, 2.0}, shape);
  const SolveRecord b = fake_record(g, {0.0, 0.5, 1.0}, {0.0, 0.0, 0.0}, shape);
  // Linear ramp, exactly integrated by the trapezoid rule for p = 1.
  EXPECT_NEAR(trajectory_norm(a, b, NormSpec::parse("lplq:1:4")), norm_lq(shape, 4.0), 1e-13);
}

TEST(TrajectoryNorm, RejectsMismatchedRecords) {
  const GridSpec g{2, 16, 2.0 * M_PI};
  const SpectralField shape = testing::random_field(g, 2, 11, true);
  const SolveRecord a = fake_record(g, {0.0, 0.1}, {1.0, 1.0}, shape);
  const SolveRecord c = fake_record(g, {0.0, 0.2}, {1.0, 1.0}, shape);
  const SolveRecord one = fake_record(g, {0.0}, {1.0}, shape);
  EXPECT_THROW(trajectory_norm(a, c, NormSpec::parse("sup")), DomainError);
  EXPECT_THROW(trajectory_norm(a, one, NormSpec::parse("sup")), DomainError);
  EXPECT_THROW(trajectory_norm(one, one, NormSpec::parse("lplq:2:4")), DomainError);
  const GridSpec g2{2, 8, 2.0 * M_PI};
  const SolveRecord d = fake_record(g2, {0.0, 0.1}, {1.0, 1.0}, testing::random_field(g2, 2, 1));
  EXPECT_THROW(trajectory_norm(a, d, NormSpec::parse("sup")), DomainError);
}

TEST(Norm, SnapshotDispatch) {
  const GridSpec g{2, 16, 2.0 * M_PI};
  const SpectralField f = testing::random_field(g, 2, 12, true);
  EXPECT_EQ(norm(f, NormSpec::parse("sup")), norm_sup(f));
  EXPECT_EQ(norm(f, NormSpec::parse("hs:1.5")), norm_hs(f, 1.5));
  EXPECT_EQ(norm(f, NormSpec::parse("bmo:3")), bmo_discrete(f, 3));
  EXPECT_THROW(norm(f, NormSpec::parse("lplq:2:4")), DomainError);
}

}  // namespace
}  // namespace fns
