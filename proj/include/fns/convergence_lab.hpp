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

#include "fns/mild_solver.hpp"
#include "fns/norms.hpp"
#include "fns/presets.hpp"

namespace fns {

// u_{0,alpha} = u_{0,2} + c_pert (2 - alpha)^kappa w with w rescaled to unit
// sup norm on the working grid.
struct DataFamilySpec {
  PresetSpec base{};
  PresetSpec perturbation{PresetKind::random_smooth, 1.0, 1, 977, 4.0, 6};
  double kappa = 1.0;
  double c_pert = 0.0;
  std::vector<double> alphas{1.9, 1.925, 1.95, 1.975, 1.99, 1.995};
  double epsilon = 0.05;

  void validate() const;
};

struct FamilyMember {
  double alpha = 2.0;
  SpectralField u0;
};

struct DataFamily {
  SpectralField base;
  SpectralField profile;  // unit sup-norm perturbation direction
  std::vector<FamilyMember> members;
};

DataFamily build_family(const GridSpec& grid, const DataFamilySpec& spec);

struct SweepOptions {
  // Horizon of every solve. Must not exceed the uniform time floor unless
  // allow_long_horizon is set; the flag is reported back in the result.
  double horizon = 0.02;
  bool allow_long_horizon = false;
  // Also solve the reference on the 2n grid to estimate the discretization
  // floor of each norm.
  bool refine_floor = true;
  double floor_factor = 100.0;
  int workers = 0;  // 0 reads FNSLAB_WORKERS, then hardware concurrency
};

// Worker count from FNSLAB_WORKERS (falls back to hardware concurrency).
int default_workers();

struct SweepResult {
  std::vector<double> alphas;
  std::vector<double> betas;  // MHD only, aligned with alphas
  std::vector<SolveRecord> records;
  SolveRecord reference;
  std::optional<SolveRecord> reference_fine;  // 2n reference, resampled to n
  double horizon = 0.0;
  double T0 = 0.0;
  double family_norm_hs = 0.0;
  bool horizon_override = false;
  double kappa = 1.0;
  double kappa_mag = 1.0;
  bool mhd = false;
};

// Runs the alpha sweep and the alpha = 2 reference on one time grid. Solves
// run on a worker pool; results are stored in alpha order.
SweepResult run_sweep(const DataFamilySpec& spec, const SolverConfig& base_cfg,
                      const SweepOptions& options = {});

// What is measured between each sweep record and the reference.
struct ErrorMeasure {
  std::string label;
  NormSpec spec;
  TrajectoryPart part = TrajectoryPart::velocity;
};

ErrorMeasure velocity_sup();
ErrorMeasure pressure_bmo(int level = 4);
ErrorMeasure magnetic_sup();
ErrorMeasure velocity_lplq(double p, double q);

struct ErrorSeries {
  std::string norm_kind;
  std::vector<double> alphas;
  std::vector<double> betas;
  std::vector<double> errors;
  std::vector<bool> excluded;
  double floor = 0.0;
};

// Errors for one measure. Like the MHD combined error below, a point is
// excluded when it falls under floor_factor times the n / 2n reference gap.
ErrorSeries measure_errors(const SweepResult& sweep, const ErrorMeasure& measure,
                           double floor_factor = 100.0);
// Velocity sup + magnetic sup + pressure BMO, summed per point.
ErrorSeries mhd_combined_errors(const SweepResult& sweep, int bmo_level = 4,
                                double floor_factor = 100.0);

struct RateFitResult {
  std::string norm_kind;
  std::vector<double> alphas;
  std::vector<double> errors;
  std::vector<bool> excluded;
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double predicted_slope = 0.0;
  double tolerance = 0.15;
  bool passed = false;
};

// log(error) against log(2 - alpha) over the points not flagged as excluded.
RateFitResult fit_rate(const std::vector<double>& alphas, const std::vector<double>& errors,
                       double predicted_slope, const std::vector<bool>& excluded = {},
                       double tolerance = 0.15);
RateFitResult fit_rate(const ErrorSeries& series, double predicted_slope, double tolerance = 0.15);

// max over points of error / ((2 - alpha) + (2 - alpha)^kappa)
double rate_constant(const std::vector<double>& alphas, const std::vector<double>& errors,
                     double kappa);

struct CompetitionRow {
  double kappa = 1.0;
  double predicted = 1.0;
  RateFitResult velocity;
  RateFitResult pressure;
  bool passed = false;
};

std::vector<CompetitionRow> competition_report(const std::vector<double>& kappas,
                                               const DataFamilySpec& base_spec,
                                               const SolverConfig& cfg,
                                               const SweepOptions& options = {});

struct MixedNormReport {
  double q = 4.0;
  double kappa = 1.0;
  double predicted = 0.75;
  std::vector<double> ps;
  std::vector<RateFitResult> fits;
  double slope_spread = 0.0;  // max - min slope over p
  bool p_independent = false;
  bool passed = false;
};

RateFitResult mixed_norm_fit(const SweepResult& sweep, double p, double q);
MixedNormReport mixed_norm_report(const SweepResult& sweep, const std::vector<double>& ps,
                                  double q);

struct MhdFamilySpec {
  DataFamilySpec velocity{};
  PresetSpec magnetic_base{PresetKind::shear, 0.5, 2};
  PresetSpec magnetic_perturbation{PresetKind::random_smooth, 1.0, 1, 1511, 4.0, 6};
  double kappa_mag = 1.0;
  double c_pert_mag = 0.0;
  // One beta per alpha. Empty means the diagonal beta = alpha.
  std::vector<double> betas;

  void validate() const;
};

SweepResult run_mhd_sweep(const MhdFamilySpec& spec, const SolverConfig& base_cfg,
                          const SweepOptions& options = {});

struct MhdReport {
  RateFitResult diagonal;
  std::vector<double> pinned_alphas;
  std::vector<double> pinned_errors;
  double pinned_beta = 1.95;
  double plateau_variation = 0.0;  // max / min - 1 over the pinned sweep
  bool plateau_passed = false;
};

// Diagonal beta = alpha sweep with fitted combined error, then beta pinned
// while alpha approaches 2 to expose the max-law plateau.
MhdReport mhd_sweep(const MhdFamilySpec& spec, const SolverConfig& cfg,
                    const std::vector<double>& pinned_alphas, double pinned_beta,
                    const SweepOptions& options = {});

}  // namespace fns
