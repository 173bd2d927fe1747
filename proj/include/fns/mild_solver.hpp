// Copyright 2026 The fnslab Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fns/spectral_field.hpp"

namespace fns {

enum class Scheme { picard_duhamel, etd_rk2 };

std::string to_string(Scheme s);
Scheme parse_scheme(const std::string& name);

struct SolverConfig {
  GridSpec grid;
  double alpha = 2.0;
  double beta = 2.0;  // magnetic diffusion order, MHD only
  double dt = 1e-3;
  double t_end = 0.1;
  double picard_tol = 1e-10;
  int picard_max_iter = 50;
  Scheme scheme = Scheme::picard_duhamel;
  // Snapshot times in (0, t_end]; t = 0 is always recorded. When empty,
  // `snapshots` equal intervals are used.
  std::vector<double> snapshot_times;
  int snapshots = 32;
  // Use |xi|^2 directly instead of the fractional symbol (reference path).
  bool classical_laplacian = false;
  // Per-step relative energy growth tolerated before aborting.
  double energy_tol = 1e-6;
  // Sobolev index used for the stability-horizon warning.
  double sobolev_s = 0.0;  // <= 0 selects 2.0 in 3D and 1.5 in 2D
  double existence_C = 1.0;

  void validate(bool mhd) const;
  double default_sobolev() const;
};

struct StepDiagnostics {
  double t = 0.0;
  double energy_kin = 0.0;
  double energy_mag = 0.0;
  double div_residual = 0.0;
  int picard_iters = 0;
};

struct SolveRecord {
  SolverConfig config;
  std::vector<double> times;
  std::vector<SpectralField> velocity;
  std::vector<SpectralField> pressure;
  std::vector<SpectralField> magnetic;  // empty for Navier-Stokes runs
  std::vector<StepDiagnostics> diagnostics;
  std::vector<std::string> warnings;

  bool has_magnetic() const { return !magnetic.empty(); }
};

// p = sum_ij R_i R_j (u_i u_j), built from dealiased products. With a magnetic
// field the products are u_i u_j - b_i b_j, matching grad p = (I - P) of the
// full quadratic forcing.
SpectralField recover_pressure(const SpectralField& u);
SpectralField recover_pressure(const SpectralField& u, const SpectralField& b);

// -P div(u (x) u), the Navier-Stokes forcing in the mild formulation.
SpectralField navier_stokes_forcing(const SpectralField& u);

struct StepResult {
  SpectralField u;
  int picard_iters = 0;
  double picard_residual = 0.0;
};

// One step of the discrete Duhamel formula over [t, t + dt]: stage values at
// the two Gauss nodes solve the collocation equations by fixed-point
// iteration; the Duhamel integral of the final update uses 2-point Gauss
// quadrature. Throws PicardDivergence when the iteration does not reach
// config.picard_tol within config.picard_max_iter sweeps.
StepResult step_picard(const SpectralField& u, double dt, const SolverConfig& config);

// Second-order exponential time differencing (Cox-Matthews ETD2).
SpectralField step_etd_rk2(const SpectralField& u, double dt, const SolverConfig& config);

SolveRecord solve_ns(const SpectralField& u0, const SolverConfig& config);
SolveRecord solve_mhd(const SpectralField& u0, const SpectralField& b0, const SolverConfig& config);

// T_alpha = 1/2 ((1 - 1/alpha) / (4 C |u0|_{H^s}))^(alpha / (alpha - 1))
double existence_time(double alpha, double data_norm_hs, double C = 1.0);
// 1/2 min over the two single-field times (each with its own exponent).
double existence_time_mhd(double alpha, double beta, double u_norm, double b_norm,
                          double C = 1.0);

struct UniformTimeFloor {
  double T0 = 0.0;
  double A = 0.0;
  bool small_branch = false;  // A < 1, T0 = A^(2/eps) / 2; otherwise A^(1+eps) / 2
  // T0 <= T_alpha(3/2 |u_{0,2}|) on every sampled alpha in (1 + eps, 2).
  bool verified = false;
  double min_ratio = 0.0;  // min over samples of T_alpha / T0
  int samples = 0;
};

// T0 = 1/2 A^(2/eps) when A < 1 and 1/2 A^(1+eps) otherwise, with
// A = (1 - 1/(1+eps)) / (4 C |u_{0,2}|_{H^s}), verified against existence_time
// on `samples` equally spaced alphas.
UniformTimeFloor uniform_time_floor(double epsilon, double data_norm_hs_limit, double C = 1.0,
                                    int samples = 100);

struct ExistenceTimeReport {
  std::vector<double> alphas;
  std::vector<double> T_alpha;
  std::vector<double> data_norms;
  double T0 = 0.0;
  double epsilon = 0.0;
  double C_const = 1.0;
  bool consistent = false;  // T0 <= T_alpha for all entries
};

ExistenceTimeReport existence_time_report(double epsilon, const std::vector<double>& alphas,
                                          const std::vector<double>& data_norms,
                                          double limit_norm, double C = 1.0);

}  // namespace fns
