// Copyright 2026 The fnslab Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy at
// http://www.apache.org/licenses/LICENSE-2.0

#include "fns/mild_solver.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

#include "fns/error.hpp"
#include "fns/norms.hpp"
#include "fns/spectral_ops.hpp"

namespace fns {

std::string to_string(Scheme s) {
  return s == Scheme::picard_duhamel ? "picard_duhamel" : "etd_rk2";
}

Scheme parse_scheme(const std::string& name) {
  if (name == "picard_duhamel" || name == "picard") return Scheme::picard_duhamel;
  if (name == "etd_rk2" || name == "etd") return Scheme::etd_rk2;
  throw DomainError("unknown scheme '" + name + "'");
}

double SolverConfig::default_sobolev() const {
  if (sobolev_s > 0.0) return sobolev_s;
  return grid.dim == 3 ? 2.0 : 1.5;
}

void SolverConfig::validate(bool mhd) const {
  grid.validate();
  FractionalSymbol check_alpha(alpha);
  if (mhd) FractionalSymbol check_beta(beta);
  if (!(dt > 0.0)) throw DomainError("time step must be positive");
  if (!(t_end > 0.0) || dt > t_end) throw DomainError("need 0 < dt <= t_end");
  if (!(picard_tol > 0.0)) throw DomainError("picard_tol must be positive");
  if (picard_max_iter < 1) throw DomainError("picard_max_iter must be >= 1");
  if (snapshot_times.empty() && snapshots < 1) throw DomainError("need at least one snapshot");
  double prev = 0.0;
  for (double t : snapshot_times) {
    if (!(t > prev) || t > t_end * (1.0 + 1e-12)) {
      throw DomainError("snapshot times must increase strictly within (0, t_end]");
    }
    prev = t;
  }
}

namespace {

using State = std::vector<SpectralField>;
using Forcing = std::function<State(const State&)>;

// (e^z - 1) / z and (e^z - 1 - z) / z^2
double phi1(double z) {
  if (std::abs(z) < 1e-8) return 1.0 + 0.5 * z;
  return std::expm1(z) / z;
}

double phi2(double z) {
  if (std::abs(z) < 0.5) {
    double term = 0.5, sum = 0.5;
    for (int k = 3; k < 30; ++k) {
      term *= z / k;
      sum += term;
      if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
  }
  return (std::expm1(z) - z) / (z * z);
}

constexpr double kGaussLo = 0.5 - 0.28867513459481288225;  // 1/2 - sqrt(3)/6
constexpr double kGaussHi = 0.5 + 0.28867513459481288225;

std::vector<double> eigenvalues(const GridSpec& grid, double order, bool classical) {
  auto table = wave_table(grid);
  std::vector<double> lambda(grid.size());
  const FractionalSymbol symbol(order);
  for (std::size_t m = 0; m < lambda.size(); ++m) {
    lambda[m] = classical ? table->k2(m) : symbol.from_k2(table->k2(m));
  }
  return lambda;
}

// Mode-wise exponential weights of both schemes for one field and one dt.
struct ExpTables {
  std::vector<double> e_dt, e_lo, e_hi, quad_lo, quad_hi, ones;
  std::vector<double> w_lo_lo, w_lo_hi, w_hi_lo, w_hi_hi;  // stage weights
  std::vector<double> dt_phi1, dt_phi2;

  ExpTables(const std::vector<double>& lambda, double dt) {
    const std::size_t n = lambda.size();
    for (auto* v : {&e_dt, &e_lo, &e_hi, &quad_lo, &quad_hi, &ones, &w_lo_lo, &w_lo_hi, &w_hi_lo,
                    &w_hi_hi, &dt_phi1, &dt_phi2}) {
      v->resize(n);
    }
    const double t1 = kGaussLo * dt, t2 = kGaussHi * dt;
    for (std::size_t m = 0; m < n; ++m) {
      const double l = lambda[m];
      e_dt[m] = std::exp(-dt * l);
      e_lo[m] = std::exp(-t1 * l);
      e_hi[m] = std::exp(-t2 * l);
      // 2-point Gauss rule for the Duhamel integral of the final update
      quad_lo[m] = 0.5 * dt * std::exp(-(dt - t1) * l);
      quad_hi[m] = 0.5 * dt * std::exp(-(dt - t2) * l);
      ones[m] = 1.0;
      // int_0^tau e^{-(tau - s) l} l_j(s) ds for the linear interpolant
      // through the two Gauss nodes.
      auto weights = [&](double tau, double& w1, double& w2) {
        const double i0 = tau * phi1(-tau * l);
        const double i1 = tau * tau * phi2(-tau * l);
        w1 = (t2 * i0 - i1) / (t2 - t1);
        w2 = (i1 - t1 * i0) / (t2 - t1);
      };
      weights(t1, w_lo_lo[m], w_lo_hi[m]);
      weights(t2, w_hi_lo[m], w_hi_hi[m]);
      dt_phi1[m] = dt * phi1(-dt * l);
      dt_phi2[m] = dt * phi2(-dt * l);
    }
  }
};

// out = a * x + sum_j w_j * y_j, mode-wise, for every component.
void combine(SpectralField& out, const std::vector<double>& a, const SpectralField& x,
             std::initializer_list<std::pair<const std::vector<double>*, const SpectralField*>>
                 terms) {
  for (int c = 0; c < x.components(); ++c) {
    auto o = out.component(c);
    auto xv = x.component(c);
    for (std::size_t m = 0; m < o.size(); ++m) o[m] = a[m] * xv[m];
    for (const auto& [w, y] : terms) {
      auto yv = y->component(c);
      const auto& wv = *w;
      for (std::size_t m = 0; m < o.size(); ++m) o[m] += wv[m] * yv[m];
    }
  }
  out.set_divergence_free(true);
}

double state_norm(const State& s) {
  double acc = 0.0;
  for (const auto& f : s) {
    for (const auto& c : f.coeffs()) acc += std::norm(c);
  }
  return std::sqrt(acc);
}

double state_distance(const State& a, const State& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto x = a[i].coeffs();
    auto y = b[i].coeffs();
    for (std::size_t k = 0; k < x.size(); ++k) acc += std::norm(x[k] - y[k]);
  }
  return std::sqrt(acc);
}

struct PicardOutcome {
  State next;
  int iterations = 0;
  double residual = 0.0;
};

PicardOutcome picard_state_step(const State& un, const std::vector<const ExpTables*>& tables,
                                const Forcing& forcing, double tol, int max_iter) {
  const std::size_t nf = un.size();
  State lo(nf), hi(nf);
  for (std::size_t i = 0; i < nf; ++i) {
    lo[i] = un[i];
    hi[i] = un[i];
    combine(lo[i], tables[i]->e_lo, un[i], {});
    combine(hi[i], tables[i]->e_hi, un[i], {});
  }
  PicardOutcome out;
  State n_lo, n_hi;
  for (int it = 1; it <= max_iter; ++it) {
    n_lo = forcing(lo);
    n_hi = forcing(hi);
    State new_lo(nf), new_hi(nf);
    for (std::size_t i = 0; i < nf; ++i) {
      const ExpTables& t = *tables[i];
      new_lo[i] = un[i];
      new_hi[i] = un[i];
      combine(new_lo[i], t.e_lo, un[i], {{&t.w_lo_lo, &n_lo[i]}, {&t.w_lo_hi, &n_hi[i]}});
      combine(new_hi[i], t.e_hi, un[i], {{&t.w_hi_lo, &n_lo[i]}, {&t.w_hi_hi, &n_hi[i]}});
    }
    const double scale = std::max(state_norm(new_lo) + state_norm(new_hi), 1e-300);
    out.residual = (state_distance(new_lo, lo) + state_distance(new_hi, hi)) / scale;
    lo = std::move(new_lo);
    hi = std::move(new_hi);
    out.iterations = it;
    if (out.residual < tol) break;
    if (it == max_iter || !std::isfinite(out.residual)) {
      std::ostringstream msg;
      msg << "Picard iteration did not contract after " << it
          << " sweeps (relative residual " << out.residual
          << "); reduce dt relative to the data size";
      throw PicardDivergence(msg.str(), out.residual, it);
    }
  }
  // Final update with the converged stage forcing.
  n_lo = forcing(lo);
  n_hi = forcing(hi);
  out.next.resize(nf);
  for (std::size_t i = 0; i < nf; ++i) {
    const ExpTables& t = *tables[i];
    out.next[i] = un[i];
    combine(out.next[i], t.e_dt, un[i], {{&t.quad_lo, &n_lo[i]}, {&t.quad_hi, &n_hi[i]}});
  }
  return out;
}

State etd_state_step(const State& un, const std::vector<const ExpTables*>& tables,
                     const Forcing& forcing) {
  const std::size_t nf = un.size();
  const State n0 = forcing(un);
  State a(nf);
  for (std::size_t i = 0; i < nf; ++i) {
    a[i] = un[i];
    combine(a[i], tables[i]->e_dt, un[i], {{&tables[i]->dt_phi1, &n0[i]}});
  }
  const State na = forcing(a);
  State next(nf);
  for (std::size_t i = 0; i < nf; ++i) {
    next[i] = a[i];
    SpectralField diff = na[i];
    diff -= n0[i];
    combine(next[i], tables[i]->ones, a[i], {{&tables[i]->dt_phi2, &diff}});
  }
  return next;
}

}  // namespace

namespace {

SpectralField pressure_from_products(const PhysicalField& u, const PhysicalField* b) {
  const GridSpec& grid = u.grid();
  auto table = wave_table(grid);
  const auto mask = dealias_mask(grid);
  const int dim = grid.dim;
  SpectralField p = SpectralField::scalar(grid);
  auto out = p.component(0);
  PhysicalField product(grid, 1);
  for (int i = 0; i < dim; ++i) {
    for (int j = i; j < dim; ++j) {
      auto q = product.component(0);
      auto ui = u.component(i), uj = u.component(j);
      for (std::size_t x = 0; x < q.size(); ++x) q[x] = ui[x] * uj[x];
      if (b != nullptr) {
        auto bi = b->component(i), bj = b->component(j);
        for (std::size_t x = 0; x < q.size(); ++x) q[x] -= bi[x] * bj[x];
      }
      const SpectralField hat = SpectralField::from_physical(product);
      auto h = hat.component(0);
      const double sym = (i == j) ? 1.0 : 2.0;
      for (std::size_t m = 0; m < out.size(); ++m) {
        const double k2 = table->k2(m);
        if (!mask[m] || k2 == 0.0) continue;
        // R_i R_j has symbol (i xi_i)(i xi_j) / |xi|^2
        out[m] -= sym * table->k(i, m) * table->k(j, m) / k2 * h[m];
      }
    }
  }
  return p;
}

State mhd_forcing(const State& s) {
  const PhysicalField u = s[0].to_physical();
  const PhysicalField b = s[1].to_physical();
  SpectralField fu = nonlinear_advection(u, u);
  fu -= nonlinear_advection(b, b);
  SpectralField fb = nonlinear_advection(u, b);
  fb -= nonlinear_advection(b, u);
  State out;
  out.push_back(leray_project(fu));
  out.push_back(leray_project(fb));
  out[0] *= -1.0;
  out[1] *= -1.0;
  return out;
}

State ns_forcing(const State& s) { return {navier_stokes_forcing(s[0])}; }

double kinetic_energy(const SpectralField& u) {
  double acc = 0.0;
  for (const auto& c : u.coeffs()) acc += std::norm(c);
  return 0.5 * acc;
}

void require_vector(const SpectralField& f, const SolverConfig& config, const char* name) {
  if (!f.is_vector() || !(f.grid() == config.grid)) {
    throw DomainError(std::string(name) + " must be a vector field on the configured grid");
  }
}

// Shared marching loop for one (NS) or two (MHD) coupled fields.
SolveRecord march(State state, const std::vector<double>& orders, const SolverConfig& config,
                  const Forcing& forcing) {
  const bool mhd = state.size() == 2;
  SolveRecord rec;
  rec.config = config;

  std::vector<std::vector<double>> lambdas;
  for (double order : orders) {
    lambdas.push_back(eigenvalues(config.grid, order, config.classical_laplacian));
  }

  for (auto& f : state) {
    apply_dealias(f);
    f = leray_project(f);
  }

  std::vector<double> targets = config.snapshot_times;
  if (targets.empty()) {
    for (int k = 1; k <= config.snapshots; ++k) {
      targets.push_back(config.t_end * static_cast<double>(k) / config.snapshots);
    }
  }

  const double s_index = config.default_sobolev();
  const double h_norm = norm_hs(state[0], s_index);
  if (h_norm > 0.0) {
    const double horizon = existence_time(config.alpha, h_norm, config.existence_C);
    if (config.t_end > horizon) {
      std::ostringstream msg;
      msg << "t_end " << config.t_end << " exceeds the existence time " << horizon
          << " (C = " << config.existence_C << ", |u0|_H^" << s_index << " = " << h_norm << ")";
      rec.warnings.push_back(msg.str());
    }
  }

  auto diagnose = [&](double t, int iters) {
    StepDiagnostics d;
    d.t = t;
    d.energy_kin = kinetic_energy(state[0]);
    d.energy_mag = mhd ? kinetic_energy(state[1]) : 0.0;
    d.div_residual = divergence_residual(state[0]);
    if (mhd) d.div_residual = std::max(d.div_residual, divergence_residual(state[1]));
    d.picard_iters = iters;
    return d;
  };
  auto record = [&](double t) {
    rec.times.push_back(t);
    rec.velocity.push_back(state[0]);
    if (mhd) rec.magnetic.push_back(state[1]);
  };

  rec.diagnostics.push_back(diagnose(0.0, 0));
  record(0.0);

  std::map<double, std::vector<ExpTables>> cache;
  double t = 0.0;
  for (double target : targets) {
    const double span = target - t;
    const long steps = std::max(1L, static_cast<long>(std::ceil(span / config.dt - 1e-9)));
    const double h = span / static_cast<double>(steps);
    auto it = cache.find(h);
    if (it == cache.end()) {
      std::vector<ExpTables> tabs;
      for (const auto& l : lambdas) tabs.emplace_back(l, h);
      it = cache.emplace(h, std::move(tabs)).first;
    }
    std::vector<const ExpTables*> tables;
    for (const auto& tab : it->second) tables.push_back(&tab);

    for (long k = 0; k < steps; ++k) {
      const double e_before = rec.diagnostics.back().energy_kin + rec.diagnostics.back().energy_mag;
      int iters = 0;
      if (config.scheme == Scheme::picard_duhamel) {
        auto outcome = picard_state_step(state, tables, forcing, config.picard_tol,
                                         config.picard_max_iter);
        state = std::move(outcome.next);
        iters = outcome.iterations;
      } else {
        state = etd_state_step(state, tables, forcing);
      }
      const double now = (k + 1 == steps) ? target : t + h * static_cast<double>(k + 1);
      rec.diagnostics.push_back(diagnose(now, iters));
      const double e_after = rec.diagnostics.back().energy_kin + rec.diagnostics.back().energy_mag;
      if (!std::isfinite(e_after) || e_after > e_before * (1.0 + config.energy_tol)) {
        std::ostringstream msg;
        msg << "energy grew from " << e_before << " to " << e_after << " at t = " << now
            << " (tolerance " << config.energy_tol << " relative per step)";
        throw EnergyViolation(msg.str());
      }
    }
    t = target;
    record(t);
  }

  for (std::size_t i = 0; i < rec.times.size(); ++i) {
    rec.pressure.push_back(mhd ? recover_pressure(rec.velocity[i], rec.magnetic[i])
                               : recover_pressure(rec.velocity[i]));
  }
  return rec;
}

}  // namespace

SpectralField recover_pressure(const SpectralField& u) {
  if (!u.is_vector()) throw DomainError("pressure recovery needs a vector field");
  return pressure_from_products(u.to_physical(), nullptr);
}

SpectralField recover_pressure(const SpectralField& u, const SpectralField& b) {
  if (!u.is_vector() || !u.compatible(b)) throw DomainError("pressure recovery: field mismatch");
  const PhysicalField bp = b.to_physical();
  return pressure_from_products(u.to_physical(), &bp);
}

SpectralField navier_stokes_forcing(const SpectralField& u) {
  SpectralField f = leray_project(nonlinear_advection(u, u));
  f *= -1.0;
  return f;
}

StepResult step_picard(const SpectralField& u, double dt, const SolverConfig& config) {
  require_vector(u, config, "velocity");
  const ExpTables tab(eigenvalues(config.grid, config.alpha, config.classical_laplacian), dt);
  auto outcome = picard_state_step({u}, {&tab}, ns_forcing, config.picard_tol,
                                   config.picard_max_iter);
  return {std::move(outcome.next[0]), outcome.iterations, outcome.residual};
}

SpectralField step_etd_rk2(const SpectralField& u, double dt, const SolverConfig& config) {
  require_vector(u, config, "velocity");
  const ExpTables tab(eigenvalues(config.grid, config.alpha, config.classical_laplacian), dt);
  return std::move(etd_state_step({u}, {&tab}, ns_forcing)[0]);
}

SolveRecord solve_ns(const SpectralField& u0, const SolverConfig& config) {
  config.validate(false);
  require_vector(u0, config, "initial velocity");
  return march({u0}, {config.alpha}, config, ns_forcing);
}

SolveRecord solve_mhd(const SpectralField& u0, const SpectralField& b0, const SolverConfig& config) {
  config.validate(true);
  require_vector(u0, config, "initial velocity");
  require_vector(b0, config, "initial magnetic field");
  return march({u0, b0}, {config.alpha, config.beta}, config, mhd_forcing);
}

double existence_time(double alpha, double data_norm_hs, double C) {
  if (!(alpha > 1.0)) throw DomainError("existence time needs alpha > 1");
  if (!(data_norm_hs > 0.0) || !(C > 0.0)) {
    throw DomainError("existence time needs positive data norm and constant");
  }
  const double base = (1.0 - 1.0 / alpha) / (4.0 * C * data_norm_hs);
  return 0.5 * std::pow(base, alpha / (alpha - 1.0));
}

double existence_time_mhd(double alpha, double beta, double u_norm, double b_norm, double C) {
  return std::min(existence_time(alpha, u_norm, C), existence_time(beta, b_norm, C));
}

UniformTimeFloor uniform_time_floor(double epsilon, double data_norm_hs_limit, double C,
                                    int samples) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw DomainError("epsilon must lie in (0, 1)");
  if (!(data_norm_hs_limit > 0.0) || !(C > 0.0)) {
    throw DomainError("uniform time floor needs positive norm and constant");
  }
  UniformTimeFloor out;
  out.A = (1.0 - 1.0 / (1.0 + epsilon)) / (4.0 * C * data_norm_hs_limit);
  out.small_branch = out.A < 1.0;
  out.T0 = 0.5 * std::pow(out.A, out.small_branch ? 2.0 / epsilon : 1.0 + epsilon);
  out.samples = samples;
  out.min_ratio = std::numeric_limits<double>::infinity();
  // Open interval (1 + eps, 2): midpoints of `samples` equal cells.
  for (int k = 0; k < samples; ++k) {
    const double a = 1.0 + epsilon + (1.0 - epsilon) * (k + 0.5) / samples;
    const double Ta = existence_time(a, 1.5 * data_norm_hs_limit, C);
    out.min_ratio = std::min(out.min_ratio, Ta / out.T0);
  }
  out.verified = samples > 0 && out.min_ratio >= 1.0;
  return out;
}

ExistenceTimeReport existence_time_report(double epsilon, const std::vector<double>& alphas,
                                          const std::vector<double>& data_norms,
                                          double limit_norm, double C) {
  if (alphas.size() != data_norms.size()) throw DomainError("alphas and norms differ in length");
  ExistenceTimeReport rep;
  rep.alphas = alphas;
  rep.data_norms = data_norms;
  rep.epsilon = epsilon;
  rep.C_const = C;
  rep.T0 = uniform_time_floor(epsilon, limit_norm, C, 0).T0;
  rep.consistent = true;
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    rep.T_alpha.push_back(existence_time(alphas[i], data_norms[i], C));
    rep.consistent = rep.consistent && rep.T0 <= rep.T_alpha.back();
  }
  return rep;
}

}  // namespace fns
