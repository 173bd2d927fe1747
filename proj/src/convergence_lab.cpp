// Copyright 2026 The fnslab Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy at
// http://www.apache.org/licenses/LICENSE-2.0

#include "fns/convergence_lab.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <functional>
#include <sstream>
#include <thread>

#include "fns/error.hpp"
#include "fns/regression.hpp"

namespace fns {

void DataFamilySpec::validate() const {
  if (!(kappa > 0.0)) throw DomainError("kappa must be positive");
  if (!(c_pert >= 0.0)) throw DomainError("c_pert must be non-negative");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw DomainError("epsilon must lie in (0, 1)");
  if (alphas.empty()) throw DomainError("alpha list is empty");
  for (double a : alphas) {
    if (!(a > 1.0 + epsilon) || a > 2.0) {
      std::ostringstream os;
      os << "alpha " << a << " outside (1 + epsilon, 2] with epsilon = " << epsilon;
      throw DomainError(os.str());
    }
  }
}

DataFamily build_family(const GridSpec& grid, const DataFamilySpec& spec) {
  spec.validate();
  DataFamily fam;
  fam.base = make_preset(grid, spec.base);
  fam.profile = make_preset(grid, spec.perturbation);
  const double sup = norm_sup(fam.profile);
  if (!(sup > 0.0)) throw DomainError("perturbation profile vanishes on this grid");
  fam.profile *= 1.0 / sup;
  fam.profile.set_divergence_free(true);
  for (double a : spec.alphas) {
    FamilyMember m;
    m.alpha = a;
    m.u0 = fam.base;
    const double gap = spec.c_pert * std::pow(2.0 - a, spec.kappa);
    if (gap != 0.0) m.u0.axpy(gap, fam.profile);
    m.u0.set_divergence_free(true);
    fam.members.push_back(std::move(m));
  }
  return fam;
}

int default_workers() {
  if (const char* env = std::getenv("FNSLAB_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

namespace {

// Runs every task, at most `workers` at a time. Task i writes only its own
// slot, so completion order cannot affect the stored results.
void run_tasks(std::vector<std::function<void()>>& tasks, int workers,
               std::vector<std::exception_ptr>& failures) {
  failures.assign(tasks.size(), nullptr);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      try {
        tasks[i]();
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  const int count = std::max(1, std::min<int>(workers, static_cast<int>(tasks.size())));
  if (count == 1) {
    worker();
    return;
  }
  std::vector<std::thread> pool;
  for (int w = 0; w < count; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

[[noreturn]] void rethrow_with_context(std::exception_ptr ep, const std::string& where) {
  try {
    std::rethrow_exception(ep);
  } catch (const PicardDivergence& e) {
    throw PicardDivergence(where + ": " + e.what(), e.residual(), e.iterations());
  } catch (const EnergyViolation& e) {
    throw EnergyViolation(where + ": " + e.what());
  } catch (const DomainError& e) {
    throw DomainError(where + ": " + e.what());
  } catch (const std::exception& e) {
    throw NumericalError(where + ": " + e.what());
  }
}

SolveRecord fine_reference(const SpectralField& u0, const SpectralField* b0,
                           const SolverConfig& cfg) {
  SolverConfig fine = cfg;
  fine.grid.n = cfg.grid.n * 2;
  const SpectralField uf = resample(u0, fine.grid);
  SolveRecord rec = b0 ? solve_mhd(uf, resample(*b0, fine.grid), fine) : solve_ns(uf, fine);
  for (auto& f : rec.velocity) f = resample(f, cfg.grid);
  for (auto& f : rec.pressure) f = resample(f, cfg.grid);
  for (auto& f : rec.magnetic) f = resample(f, cfg.grid);
  rec.config.grid = cfg.grid;
  return rec;
}

void check_horizon(SweepResult& out, double epsilon, const SweepOptions& options,
                   const SolverConfig& cfg) {
  if (!(options.horizon > 0.0)) throw DomainError("sweep horizon must be positive");
  out.horizon = options.horizon;
  out.T0 = uniform_time_floor(epsilon, out.family_norm_hs, cfg.existence_C).T0;
  out.horizon_override = options.horizon > out.T0;
  if (out.horizon_override && !options.allow_long_horizon) {
    std::ostringstream os;
    os << "horizon " << options.horizon << " exceeds the uniform time floor T0 = " << out.T0
       << " (C = " << cfg.existence_C << "); pass the long-horizon override to proceed";
    throw DomainError(os.str());
  }
}

std::string alpha_label(double a, double b, bool mhd) {
  std::ostringstream os;
  os << "alpha = " << a;
  if (mhd) os << ", beta = " << b;
  return os.str();
}

SweepResult execute(const std::vector<double>& alphas, const std::vector<double>& betas,
                    const std::vector<SpectralField>& u0s, const std::vector<SpectralField>& b0s,
                    const SpectralField& u_base, const SpectralField* b_base,
                    const SolverConfig& base_cfg, const SweepOptions& options, SweepResult out) {
  const bool mhd = b_base != nullptr;
  SolverConfig cfg = base_cfg;
  cfg.t_end = out.horizon;
  cfg.alpha = 2.0;
  cfg.beta = 2.0;
  cfg.validate(mhd);

  const std::size_t count = alphas.size();
  out.records.resize(count);
  out.alphas = alphas;
  if (mhd) out.betas = betas;
  std::vector<std::function<void()>> tasks;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < count; ++i) {
    tasks.emplace_back([&, i] {
      SolverConfig c = cfg;
      c.alpha = alphas[i];
      if (mhd) c.beta = betas[i];
      out.records[i] = mhd ? solve_mhd(u0s[i], b0s[i], c) : solve_ns(u0s[i], c);
    });
    labels.push_back(alpha_label(alphas[i], mhd ? betas[i] : 2.0, mhd));
  }
  tasks.emplace_back([&] {
    out.reference = mhd ? solve_mhd(u_base, *b_base, cfg) : solve_ns(u_base, cfg);
  });
  labels.push_back("reference " + alpha_label(2.0, 2.0, mhd));
  if (options.refine_floor) {
    tasks.emplace_back([&] { out.reference_fine = fine_reference(u_base, b_base, cfg); });
    labels.push_back("refined reference");
  }
  const int workers = options.workers > 0 ? options.workers : default_workers();
  std::vector<std::exception_ptr> failures;
  run_tasks(tasks, workers, failures);
  for (std::size_t i = 0; i < failures.size(); ++i) {
    if (failures[i]) rethrow_with_context(failures[i], "sweep failed at " + labels[i]);
  }
  out.mhd = mhd;
  return out;
}

}  // namespace

SweepResult run_sweep(const DataFamilySpec& spec, const SolverConfig& base_cfg,
                      const SweepOptions& options) {
  const DataFamily fam = build_family(base_cfg.grid, spec);
  SweepResult out;
  out.kappa = spec.kappa;
  const double s = base_cfg.default_sobolev();
  out.family_norm_hs = norm_hs(fam.base, s);
  for (const auto& m : fam.members) out.family_norm_hs = std::max(out.family_norm_hs, norm_hs(m.u0, s));
  check_horizon(out, spec.epsilon, options, base_cfg);

  std::vector<SpectralField> u0s;
  for (const auto& m : fam.members) u0s.push_back(m.u0);
  return execute(spec.alphas, {}, u0s, {}, fam.base, nullptr, base_cfg, options, std::move(out));
}

void MhdFamilySpec::validate() const {
  velocity.validate();
  if (!betas.empty() && betas.size() != velocity.alphas.size()) {
    throw DomainError("beta list must match the alpha list");
  }
  if (!(kappa_mag > 0.0) || !(c_pert_mag >= 0.0)) throw DomainError("invalid magnetic data rate");
}

SweepResult run_mhd_sweep(const MhdFamilySpec& spec, const SolverConfig& base_cfg,
                          const SweepOptions& options) {
  spec.validate();
  const DataFamily vel = build_family(base_cfg.grid, spec.velocity);
  DataFamilySpec mspec = spec.velocity;
  mspec.base = spec.magnetic_base;
  mspec.perturbation = spec.magnetic_perturbation;
  mspec.kappa = spec.kappa_mag;
  mspec.c_pert = spec.c_pert_mag;
  if (!spec.betas.empty()) mspec.alphas = spec.betas;
  const DataFamily mag = build_family(base_cfg.grid, mspec);

  SweepResult out;
  out.kappa = spec.velocity.kappa;
  out.kappa_mag = spec.kappa_mag;
  const double s = base_cfg.default_sobolev();
  out.family_norm_hs = std::max(norm_hs(vel.base, s), norm_hs(mag.base, s));
  for (const auto& m : vel.members) out.family_norm_hs = std::max(out.family_norm_hs, norm_hs(m.u0, s));
  for (const auto& m : mag.members) out.family_norm_hs = std::max(out.family_norm_hs, norm_hs(m.u0, s));
  check_horizon(out, spec.velocity.epsilon, options, base_cfg);

  std::vector<SpectralField> u0s, b0s;
  for (const auto& m : vel.members) u0s.push_back(m.u0);
  for (const auto& m : mag.members) b0s.push_back(m.u0);
  return execute(spec.velocity.alphas, mspec.alphas, u0s, b0s, vel.base, &mag.base, base_cfg,
                 options, std::move(out));
}

ErrorMeasure velocity_sup() { return {"velocity_sup", NormSpec{NormKind::sup}, TrajectoryPart::velocity}; }

ErrorMeasure pressure_bmo(int level) {
  NormSpec spec{NormKind::bmo};
  spec.bmo_level = level;
  return {"pressure_bmo", spec, TrajectoryPart::pressure};
}

ErrorMeasure magnetic_sup() { return {"magnetic_sup", NormSpec{NormKind::sup}, TrajectoryPart::magnetic}; }

ErrorMeasure velocity_lplq(double p, double q) {
  NormSpec spec{NormKind::lplq};
  spec.p = p;
  spec.q = q;
  spec.validate();
  return {"velocity_" + spec.name(), spec, TrajectoryPart::velocity};
}

ErrorSeries measure_errors(const SweepResult& sweep, const ErrorMeasure& measure,
                           double floor_factor) {
  ErrorSeries out;
  out.norm_kind = measure.label;
  out.alphas = sweep.alphas;
  out.betas = sweep.betas;
  if (sweep.reference_fine) {
    out.floor = trajectory_norm(*sweep.reference_fine, sweep.reference, measure.spec, measure.part);
  }
  for (const auto& rec : sweep.records) {
    const double e = trajectory_norm(rec, sweep.reference, measure.spec, measure.part);
    out.errors.push_back(e);
    out.excluded.push_back(e < floor_factor * out.floor);
  }
  return out;
}

ErrorSeries mhd_combined_errors(const SweepResult& sweep, int bmo_level, double floor_factor) {
  if (!sweep.mhd) throw DomainError("combined MHD error needs an MHD sweep");
  const ErrorSeries parts[] = {measure_errors(sweep, velocity_sup(), floor_factor),
                               measure_errors(sweep, magnetic_sup(), floor_factor),
                               measure_errors(sweep, pressure_bmo(bmo_level), floor_factor)};
  ErrorSeries out = parts[0];
  out.norm_kind = "combined";
  for (std::size_t i = 0; i < out.errors.size(); ++i) {
    out.errors[i] = parts[0].errors[i] + parts[1].errors[i] + parts[2].errors[i];
  }
  out.floor = parts[0].floor + parts[1].floor + parts[2].floor;
  for (std::size_t i = 0; i < out.errors.size(); ++i) {
    out.excluded[i] = out.errors[i] < floor_factor * out.floor;
  }
  return out;
}

RateFitResult fit_rate(const std::vector<double>& alphas, const std::vector<double>& errors,
                       double predicted_slope, const std::vector<bool>& excluded,
                       double tolerance) {
  if (alphas.size() != errors.size()) throw DomainError("alpha and error lists differ in length");
  if (!excluded.empty() && excluded.size() != errors.size()) {
    throw DomainError("exclusion flags do not match the error list");
  }
  RateFitResult out;
  out.alphas = alphas;
  out.errors = errors;
  out.excluded = excluded.empty() ? std::vector<bool>(errors.size(), false) : excluded;
  out.predicted_slope = predicted_slope;
  out.tolerance = tolerance;
  std::vector<double> x, y;
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    if (out.excluded[i]) continue;
    if (!(alphas[i] < 2.0)) throw DomainError("rate fits need alpha < 2 at every point");
    if (!(errors[i] > 0.0)) {
      std::ostringstream os;
      os << "non-positive error " << errors[i] << " at alpha = " << alphas[i]
         << "; the trajectories coincide. Use c_pert = 0 kernel-only mode with a finer"
            " measurement instead";
      throw NumericalError(os.str());
    }
    x.push_back(std::log(2.0 - alphas[i]));
    y.push_back(std::log(errors[i]));
  }
  if (x.size() < 3) throw DomainError("rate fits need at least 3 usable points");
  const LineFit fit = fit_line(x, y);
  out.slope = fit.slope;
  out.intercept = fit.intercept;
  out.r_squared = fit.r_squared;
  out.passed = std::abs(out.slope - predicted_slope) <= tolerance;
  return out;
}

RateFitResult fit_rate(const ErrorSeries& series, double predicted_slope, double tolerance) {
  RateFitResult r = fit_rate(series.alphas, series.errors, predicted_slope, series.excluded, tolerance);
  r.norm_kind = series.norm_kind;
  return r;
}

double rate_constant(const std::vector<double>& alphas, const std::vector<double>& errors,
                     double kappa) {
  double worst = 0.0;
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    const double gap = 2.0 - alphas[i];
    if (!(gap > 0.0)) continue;
    worst = std::max(worst, errors[i] / (gap + std::pow(gap, kappa)));
  }
  return worst;
}

std::vector<CompetitionRow> competition_report(const std::vector<double>& kappas,
                                               const DataFamilySpec& base_spec,
                                               const SolverConfig& cfg,
                                               const SweepOptions& options) {
  std::vector<CompetitionRow> rows;
  for (double kappa : kappas) {
    DataFamilySpec spec = base_spec;
    spec.kappa = kappa;
    const SweepResult sweep = run_sweep(spec, cfg, options);
    CompetitionRow row;
    row.kappa = kappa;
    row.predicted = std::min(1.0, kappa);
    row.velocity = fit_rate(measure_errors(sweep, velocity_sup(), options.floor_factor), row.predicted);
    row.pressure = fit_rate(measure_errors(sweep, pressure_bmo(), options.floor_factor), row.predicted);
    row.passed = row.velocity.passed && row.pressure.passed;
    rows.push_back(std::move(row));
  }
  return rows;
}

RateFitResult mixed_norm_fit(const SweepResult& sweep, double p, double q) {
  const ErrorMeasure m = velocity_lplq(p, q);
  const double predicted = (1.0 - 1.0 / q) * std::min(1.0, sweep.kappa);
  return fit_rate(measure_errors(sweep, m), predicted);
}

MixedNormReport mixed_norm_report(const SweepResult& sweep, const std::vector<double>& ps,
                                  double q) {
  if (ps.empty()) throw DomainError("mixed-norm report needs at least one p");
  MixedNormReport out;
  out.q = q;
  out.kappa = sweep.kappa;
  out.predicted = (1.0 - 1.0 / q) * std::min(1.0, sweep.kappa);
  out.ps = ps;
  double lo = INFINITY, hi = -INFINITY;
  out.passed = true;
  for (double p : ps) {
    out.fits.push_back(mixed_norm_fit(sweep, p, q));
    lo = std::min(lo, out.fits.back().slope);
    hi = std::max(hi, out.fits.back().slope);
    out.passed = out.passed && out.fits.back().passed;
  }
  out.slope_spread = hi - lo;
  out.p_independent = out.slope_spread <= 0.05;
  out.passed = out.passed && out.p_independent;
  return out;
}

MhdReport mhd_sweep(const MhdFamilySpec& spec, const SolverConfig& cfg,
                    const std::vector<double>& pinned_alphas, double pinned_beta,
                    const SweepOptions& options) {
  MhdReport out;
  MhdFamilySpec diag = spec;
  diag.betas.clear();
  const SweepResult d = run_mhd_sweep(diag, cfg, options);
  const double predicted = std::min({1.0, spec.velocity.kappa, spec.kappa_mag});
  out.diagonal = fit_rate(mhd_combined_errors(d, 4, options.floor_factor), predicted);

  MhdFamilySpec pinned = spec;
  pinned.velocity.alphas = pinned_alphas;
  pinned.betas.assign(pinned_alphas.size(), pinned_beta);
  SweepOptions popt = options;
  popt.refine_floor = false;
  const SweepResult p = run_mhd_sweep(pinned, cfg, popt);
  const ErrorSeries e = mhd_combined_errors(p, 4, options.floor_factor);
  out.pinned_alphas = pinned_alphas;
  out.pinned_errors = e.errors;
  out.pinned_beta = pinned_beta;
  const auto [lo, hi] = std::minmax_element(e.errors.begin(), e.errors.end());
  out.plateau_variation = *lo > 0.0 ? *hi / *lo - 1.0 : INFINITY;
  out.plateau_passed = out.plateau_variation < 0.25;
  return out;
}

}  // namespace fns
