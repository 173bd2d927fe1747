// Copyright 2026 The fnslab Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy at
// http://www.apache.org/licenses/LICENSE-2.0

#include "fns/fractional_kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "fns/error.hpp"
#include "fns/regression.hpp"
#include "fns/spectral_ops.hpp"

namespace fns {

void SemigroupMultiplier::validate() const {
  if (!(alpha > 1.0 && alpha <= 2.0)) {
    throw DomainError("semigroup order must lie in (1, 2], got " + std::to_string(alpha));
  }
  if (!(t >= 0.0)) throw DomainError("semigroup time must be non-negative");
}

double SemigroupMultiplier::at_k2(double k2) const {
  return std::exp(-t * FractionalSymbol(alpha).from_k2(k2));
}

SpectralField semigroup_apply(const SemigroupMultiplier& m, const SpectralField& f) {
  m.validate();
  auto table = wave_table(f.grid());
  const FractionalSymbol symbol(m.alpha);
  std::vector<double> factor(f.modes());
  for (std::size_t k = 0; k < factor.size(); ++k) {
    factor[k] = std::exp(-m.t * symbol.from_k2(table->k2(k)));
  }
  SpectralField out = f;
  for (int c = 0; c < out.components(); ++c) {
    auto v = out.component(c);
    for (std::size_t k = 0; k < v.size(); ++k) v[k] *= factor[k];
  }
  return out;
}

double unit_sphere_area(int dim) {
  switch (dim) {
    case 1: return 2.0;
    case 2: return 2.0 * std::numbers::pi;
    case 3: return 4.0 * std::numbers::pi;
    default: throw DomainError("unsupported dimension " + std::to_string(dim));
  }
}

double minimal_sobolev_index(int dim, KernelIntegrand integrand) {
  return 0.5 * dim + (integrand == KernelIntegrand::gradient ? 1.0 : 0.0);
}

namespace {

void check_inputs(double alpha, double s, int dim, KernelIntegrand integrand) {
  if (!(alpha > 1.0 && alpha <= 2.0)) {
    throw DomainError("alpha must lie in (1, 2], got " + std::to_string(alpha));
  }
  if (dim != 2 && dim != 3) throw DomainError("kernel distances support dim 2 or 3");
  const double s_min = minimal_sobolev_index(dim, integrand);
  if (!(s > s_min)) {
    throw DomainError("Sobolev index s = " + std::to_string(s) + " must exceed " +
                      std::to_string(s_min) + " for this integrand in dimension " +
                      std::to_string(dim));
  }
}

// exp(-t r^a) - exp(-t r^2) without cancellation.
double kernel_gap(double alpha, double t, double r) {
  if (r == 0.0) return 0.0;
  const double r2 = r * r;
  // t (r^a - r^2) = t r^2 expm1((a - 2) log r)
  const double shift = t * r2 * std::expm1((alpha - 2.0) * std::log(r));
  const double ta = t * r2 + shift;
  return -std::exp(-ta) * std::expm1(shift);
}

// Rigorous bound on omega_d int_R^inf |gap|^2 r^q dr for R >= 1, q < -1.
double tail_bound(double alpha, double t, double R, double q, double omega) {
  const double algebraic = std::pow(R, q + 1.0) / (-q - 1.0);
  const double expo = std::pow(R, q) * std::exp(-2.0 * t * std::pow(R, alpha)) /
                      (2.0 * t * std::pow(R, alpha - 1.0));
  return omega * std::min(algebraic, expo);
}

}  // namespace

SquaredDistance kernel_distance_sq(double alpha, double s, double t, int dim,
                                   KernelIntegrand integrand, const QuadratureConfig& quad) {
  check_inputs(alpha, s, dim, integrand);
  if (!(t >= 0.0)) throw DomainError("time must be non-negative");
  SquaredDistance out;
  if (t == 0.0 || alpha == 2.0) return out;

  const double omega = unit_sphere_area(dim);
  const double power = dim - 1 + (integrand == KernelIntegrand::gradient ? 2 : 0);
  auto g = [&](double r) {
    const double gap = kernel_gap(alpha, t, r);
    return gap * gap * std::pow(r, power) * std::pow(1.0 + r * r, -s);
  };

  using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
  auto panel = [&](double a, double b) {
    double err = 0.0;
    const double v = GK::integrate(g, a, b, quad.panel_max_depth, quad.panel_rel_tol, &err);
    out.quad_error += err;
    return v;
  };

  // Geometric panels resolve both the small-r region and the peak near
  // r ~ t^(-1/alpha).
  const double peak = std::pow(t, -1.0 / alpha);
  const double lo = std::min(1.0, peak) / 64.0;
  double R = std::max(16.0 * peak, 16.0);
  std::vector<double> breaks{0.0};
  for (double b = lo; b < R; b *= 2.0) breaks.push_back(b);
  breaks.push_back(1.0);
  breaks.push_back(R);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  double body = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) body += panel(breaks[i], breaks[i + 1]);

  const double q = power - 2.0 * s;
  for (int iter = 0; iter < 60; ++iter) {
    const double tol = std::min(quad.tail_tol, quad.tail_rel_tol * omega * body);
    const double bound = tail_bound(alpha, t, R, q, omega);
    if (bound <= tol) break;
    body += panel(R, 2.0 * R);
    R *= 2.0;
  }
  body *= omega;
  out.quad_error *= omega;
  out.value = body;
  out.cutoff = R;
  out.tail_bound = tail_bound(alpha, t, R, q, omega);
  return out;
}

namespace {

KernelDistance sup_over_time(double alpha, double s, double horizon, int dim,
                             KernelIntegrand integrand, const QuadratureConfig& quad) {
  check_inputs(alpha, s, dim, integrand);
  if (!(horizon > 0.0)) throw DomainError("time horizon must be positive");
  if (quad.coarse_points < 3) throw DomainError("coarse time scan needs >= 3 points");

  const int npts = quad.coarse_points;
  std::vector<double> times(npts);
  std::vector<SquaredDistance> vals(npts);
  for (int k = 0; k < npts; ++k) {
    times[k] = horizon * std::pow(quad.scan_floor, 1.0 - static_cast<double>(k) / (npts - 1));
    vals[k] = kernel_distance_sq(alpha, s, times[k], dim, integrand, quad);
  }
  int best = 0;
  for (int k = 1; k < npts; ++k) {
    if (vals[k].value > vals[best].value) best = k;
  }
  KernelDistance out;
  SquaredDistance top = vals[best];
  out.t_star = times[best];

  if (top.value > 0.0) {
    // Golden section on the bracketing interval of the coarse maximum.
    double a = times[std::max(best - 1, 0)];
    double b = times[std::min(best + 1, npts - 1)];
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    auto eval = [&](double t) { return kernel_distance_sq(alpha, s, t, dim, integrand, quad); };
    SquaredDistance f1 = eval(x1), f2 = eval(x2);
    while (b - a > quad.time_rel_tol * b) {
      if (f1.value > f2.value) {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - inv_phi * (b - a);
        f1 = eval(x1);
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + inv_phi * (b - a);
        f2 = eval(x2);
      }
    }
    const SquaredDistance& cand = f1.value > f2.value ? f1 : f2;
    const double tc = f1.value > f2.value ? x1 : x2;
    if (cand.value > top.value) {
      top = cand;
      out.t_star = tc;
    }
  }

  const double delta = top.quad_error + top.tail_bound;
  out.value = std::sqrt(top.value);
  const double denom = out.value + std::sqrt(std::max(top.value - delta, 0.0));
  out.err_bound = denom > 0.0 ? delta / denom : std::sqrt(delta);
  return out;
}

}  // namespace

KernelDistance kernel_distance_hms(double alpha, double s, double horizon, int dim,
                                   const QuadratureConfig& quad) {
  return sup_over_time(alpha, s, horizon, dim, KernelIntegrand::kernel, quad);
}

KernelDistance grad_kernel_distance_hms(double alpha, double s, double horizon, int dim,
                                        const QuadratureConfig& quad) {
  return sup_over_time(alpha, s, horizon, dim, KernelIntegrand::gradient, quad);
}

void fit_two_sided_constants(KernelDistanceReport& report) {
  const auto& a = report.alphas;
  if (a.size() < 2) throw DomainError("two-sided certification needs >= 2 alphas");
  std::vector<double> lx, ly, lg;
  report.fitted_upper_C = 0.0;
  report.fitted_lower_c = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double gap = 2.0 - a[i];
    const double v = report.distances[i];
    report.fitted_upper_C = std::max(report.fitted_upper_C, v / (report.horizon * gap));
    report.fitted_lower_c = std::min(report.fitted_lower_c, v / (0.5 * report.horizon * gap));
    lx.push_back(std::log(gap));
    ly.push_back(std::log(v));
    if (i < report.grad_distances.size()) lg.push_back(std::log(report.grad_distances[i]));
  }
  report.slope = fit_line(lx, ly).slope;
  if (lg.size() == lx.size()) report.grad_slope = fit_line(lx, lg).slope;
  report.passed = report.fitted_lower_c > 0.0 &&
                  report.fitted_lower_c <= 2.0 * report.fitted_upper_C &&
                  report.slope >= 0.9 && report.slope <= 1.1;
}

KernelDistanceReport certify_two_sided_bound(double s, double horizon,
                                             const std::vector<double>& alpha_grid, int dim,
                                             double grad_s, const QuadratureConfig& quad) {
  for (double a : alpha_grid) {
    if (!(a > 1.0 && a < 2.0)) {
      throw DomainError("certification grid must lie strictly inside (1, 2); got " +
                        std::to_string(a));
    }
  }
  KernelDistanceReport report;
  report.dim = dim;
  report.s = s;
  report.grad_s = grad_s > 0.0 ? grad_s : s + 1.0;
  report.horizon = horizon;
  report.alphas = alpha_grid;
  for (double a : alpha_grid) {
    const auto d = kernel_distance_hms(a, s, horizon, dim, quad);
    const auto g = grad_kernel_distance_hms(a, report.grad_s, horizon, dim, quad);
    report.distances.push_back(d.value);
    report.t_stars.push_back(d.t_star);
    report.grad_distances.push_back(g.value);
    report.quadrature_error_bound =
        std::max({report.quadrature_error_bound, d.err_bound, g.err_bound});
  }
  fit_two_sided_constants(report);
  return report;
}

double grad_kernel_l1_check(double alpha, double t, int dim, int n, double box_in_kernel_lengths) {
  if (!(t > 0.0)) throw DomainError("gradient kernel check needs t > 0");
  if (!(alpha > 1.0 && alpha <= 2.0)) throw DomainError("alpha must lie in (1, 2]");
  const double scale = std::pow(t, 1.0 / alpha);
  GridSpec grid{dim, n, box_in_kernel_lengths * scale};
  auto table = wave_table(grid);
  const FractionalSymbol symbol(alpha);
  const double volume = std::pow(grid.length, dim);
  SpectralField grad = SpectralField::vector(grid);
  for (std::size_t m = 0; m < grid.size(); ++m) {
    if (table->nyquist(m)) continue;
    const double h = std::exp(-t * symbol.from_k2(table->k2(m))) / volume;
    for (int a = 0; a < dim; ++a) grad.at(a, m) = Complex(0.0, table->k(a, m) * h);
  }
  const PhysicalField phys = grad.to_physical();
  double l1 = 0.0;
  for (std::size_t p = 0; p < phys.points(); ++p) l1 += phys.magnitude(p);
  l1 *= std::pow(grid.dx(), dim);
  return l1 / std::pow(t, -1.0 / alpha);
}

}  // namespace fns
