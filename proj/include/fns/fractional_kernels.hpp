// Copyright 2026 The fnslab Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <vector>

#include "fns/spectral_field.hpp"

namespace fns {

// Fourier multiplier exp(-t |xi|^alpha) of the fractional heat semigroup.
struct SemigroupMultiplier {
  double alpha = 2.0;
  double t = 0.0;

  void validate() const;
  double at_k2(double k2) const;
};

// Mode-wise multiplication by exp(-t |xi|^alpha). Throws DomainError for t < 0.
SpectralField semigroup_apply(const SemigroupMultiplier& m, const SpectralField& f);

struct QuadratureConfig {
  // Relative tolerance handed to each Gauss-Kronrod panel.
  double panel_rel_tol = 1e-12;
  int panel_max_depth = 18;
  // Absolute target for the truncated tail of the squared norm, tightened to
  // tail_rel_tol times the body value when that is smaller.
  double tail_tol = 1e-10;
  double tail_rel_tol = 1e-12;
  // Time sup: log-spaced scan over [T * scan_floor, T], then golden section.
  int coarse_points = 64;
  double scan_floor = 1e-6;
  double time_rel_tol = 1e-10;
};

enum class KernelIntegrand {
  kernel,    // h_alpha - h
  gradient,  // grad h_alpha - grad h (one extra power r^2)
};

struct KernelDistance {
  double value = 0.0;      // sup_t of the H^{-s} norm
  double t_star = 0.0;     // maximizing time
  double err_bound = 0.0;  // quadrature + tail bound on value
};

struct SquaredDistance {
  double value = 0.0;  // squared H^{-s} norm at one time
  double quad_error = 0.0;
  double tail_bound = 0.0;
  double cutoff = 0.0;  // truncation radius R
};

// Surface area of the unit sphere in R^dim.
double unit_sphere_area(int dim);

// Smallest Sobolev index for which sup_t of the distance stays finite.
double minimal_sobolev_index(int dim, KernelIntegrand integrand);

// omega_d int_0^inf |exp(-t r^a) - exp(-t r^2)|^2 r^(d-1[+2]) (1+r^2)^(-s) dr
SquaredDistance kernel_distance_sq(double alpha, double s, double t, int dim,
                                   KernelIntegrand integrand, const QuadratureConfig& quad = {});

KernelDistance kernel_distance_hms(double alpha, double s, double horizon, int dim = 3,
                                   const QuadratureConfig& quad = {});
KernelDistance grad_kernel_distance_hms(double alpha, double s, double horizon, int dim = 3,
                                        const QuadratureConfig& quad = {});

struct KernelDistanceReport {
  int dim = 3;
  double s = 2.0;
  double grad_s = 3.0;  // index used for the gradient distances
  double horizon = 1.0;
  std::vector<double> alphas;
  std::vector<double> distances;
  std::vector<double> t_stars;
  std::vector<double> grad_distances;
  double fitted_upper_C = 0.0;
  double fitted_lower_c = 0.0;
  double slope = 0.0;
  double grad_slope = 0.0;
  double quadrature_error_bound = 0.0;
  bool passed = false;
};

// Fits C = max v / (T (2 - a)) and c = min v / ((T / 2)(2 - a)); passes iff
// 0 < c <= 2 C and the log-log slope of v against (2 - a) lies in [0.9, 1.1].
// grad_s <= 0 selects s + 1.
KernelDistanceReport certify_two_sided_bound(double s, double horizon,
                                             const std::vector<double>& alpha_grid, int dim = 3,
                                             double grad_s = 0.0,
                                             const QuadratureConfig& quad = {});

// Same c, C and slope computation from precomputed distances.
void fit_two_sided_constants(KernelDistanceReport& report);

// ||grad h_alpha(t)||_{L^1} / t^(-1/alpha), with the kernel synthesized by an
// inverse FFT of i xi exp(-t |xi|^alpha). The box is scaled with the kernel
// length t^(1/alpha) so every t is resolved equally well.
double grad_kernel_l1_check(double alpha, double t, int dim = 3, int n = 128,
                            double box_in_kernel_lengths = 40.0);

}  // namespace fns
