// Copyright 2026 The fnslab Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy at
// http://www.apache.org/licenses/LICENSE-2.0

#include "fns/presets.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "fns/error.hpp"
#include "fns/norms.hpp"
#include "fns/spectral_ops.hpp"

namespace fns {

std::string PresetSpec::name() const {
  switch (kind) {
    case PresetKind::taylor_green: return "taylor_green";
    case PresetKind::random_smooth: return "random_smooth";
    case PresetKind::shear: return "shear";
    case PresetKind::zero: return "zero";
  }
  return "?";
}

PresetKind parse_preset(const std::string& name) {
  if (name == "taylor_green" || name == "tg") return PresetKind::taylor_green;
  if (name == "random_smooth" || name == "random") return PresetKind::random_smooth;
  if (name == "shear") return PresetKind::shear;
  if (name == "zero") return PresetKind::zero;
  throw DomainError("unknown data preset '" + name + "'");
}

namespace {

template <class Fn>
SpectralField sample_vector(const GridSpec& grid, Fn&& fn) {
  PhysicalField phys(grid, grid.dim);
  std::vector<double> x(grid.dim);
  std::vector<double> val(grid.dim);
  for (std::size_t p = 0; p < phys.points(); ++p) {
    for (int a = 0; a < grid.dim; ++a) x[a] = phys.coordinate(a, p);
    fn(x, val);
    for (int c = 0; c < grid.dim; ++c) phys.component(c)[p] = val[c];
  }
  SpectralField f = SpectralField::from_physical(phys);
  enforce_hermitian(f);
  apply_dealias(f);
  return leray_project(f);
}

}  // namespace

SpectralField taylor_green(const GridSpec& grid, double amplitude, int k) {
  return taylor_green_exact(grid, 0.0, 2.0, amplitude, k);
}

SpectralField taylor_green_exact(const GridSpec& grid, double t, double alpha, double amplitude,
                                 int k) {
  grid.validate();
  const double w = 2.0 * M_PI / grid.length * k;
  if (grid.dim == 2) {
    const double decay = amplitude * std::exp(-t * std::pow(2.0 * w * w, alpha / 2.0));
    return sample_vector(grid, [&](const std::vector<double>& x, std::vector<double>& v) {
      v[0] = decay * std::sin(w * x[0]) * std::cos(w * x[1]);
      v[1] = -decay * std::cos(w * x[0]) * std::sin(w * x[1]);
    });
  }
  if (t != 0.0) throw DomainError("closed-form Taylor-Green evolution is 2D only");
  return sample_vector(grid, [&](const std::vector<double>& x, std::vector<double>& v) {
    v[0] = amplitude * std::sin(w * x[0]) * std::cos(w * x[1]) * std::cos(w * x[2]);
    v[1] = -amplitude * std::cos(w * x[0]) * std::sin(w * x[1]) * std::cos(w * x[2]);
    v[2] = 0.0;
  });
}

namespace {

SpectralField shear_flow(const GridSpec& grid, double amplitude, int k) {
  const double w = 2.0 * M_PI / grid.length * k;
  return sample_vector(grid, [&](const std::vector<double>& x, std::vector<double>& v) {
    v[0] = amplitude * std::sin(w * x[1]);
    v[1] = 0.5 * amplitude * std::sin(w * x[0]);
    if (v.size() == 3) v[2] = 0.0;
  });
}

// Draws the raw coefficients in a resolution-independent order.
SpectralField draw_solenoidal(const GridSpec& grid, std::uint64_t seed, double decay, int kmax) {
  if (kmax < 1) throw DomainError("random field needs kmax >= 1");
  if (3 * kmax >= grid.n) throw DomainError("grid too coarse for the requested kmax");
  auto table = wave_table(grid);
  SpectralField f = SpectralField::vector(grid);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const int side = 2 * kmax + 1;
  std::size_t count = 1;
  for (int a = 0; a < grid.dim; ++a) count *= side;
  std::vector<int> k(grid.dim), kneg(grid.dim);
  for (std::size_t idx = 0; idx < count; ++idx) {
    std::size_t rest = idx;
    for (int a = grid.dim - 1; a >= 0; --a) {
      k[a] = static_cast<int>(rest % side) - kmax;
      rest /= side;
    }
    double k2 = 0.0;
    for (int a = 0; a < grid.dim; ++a) {
      k2 += static_cast<double>(k[a]) * k[a];
      kneg[a] = -k[a];
    }
    std::vector<Complex> draw(grid.dim);
    for (auto& d : draw) d = {gauss(rng), gauss(rng)};
    // Keep the draw for the lexicographically positive half; its partner
    // gets the conjugate so the field is real.
    if (k2 == 0.0 || !std::lexicographical_compare(kneg.begin(), kneg.end(), k.begin(), k.end())) {
      continue;
    }
    const double amp = std::pow(std::sqrt(k2), -decay);
    const std::size_t m = table->flat_index(k);
    const std::size_t mc = table->flat_index(kneg);
    for (int c = 0; c < grid.dim; ++c) {
      f.at(c, m) = amp * draw[c];
      f.at(c, mc) = amp * std::conj(draw[c]);
    }
  }
  return leray_project(f);
}

}  // namespace

SpectralField random_solenoidal(const GridSpec& grid, std::uint64_t seed, double decay, int kmax) {
  grid.validate();
  SpectralField f = draw_solenoidal(grid, seed, decay, kmax);
  int ref_n = 8;
  while (ref_n < 8 * kmax) ref_n *= 2;
  const GridSpec ref{grid.dim, ref_n, grid.length};
  const double sup = norm_sup(draw_solenoidal(ref, seed, decay, kmax));
  if (!(sup > 0.0)) throw NumericalError("random field has zero sup norm");
  f *= 1.0 / sup;
  f.set_divergence_free(true);
  return f;
}

SpectralField make_preset(const GridSpec& grid, const PresetSpec& spec) {
  switch (spec.kind) {
    case PresetKind::taylor_green: return taylor_green(grid, spec.amplitude, spec.wavenumber);
    case PresetKind::shear: return shear_flow(grid, spec.amplitude, spec.wavenumber);
    case PresetKind::random_smooth: {
      SpectralField f = random_solenoidal(grid, spec.seed, spec.spectrum_decay, spec.kmax);
      f *= spec.amplitude;
      f.set_divergence_free(true);
      return f;
    }
    case PresetKind::zero: {
      SpectralField f = SpectralField::vector(grid);
      f.set_divergence_free(true);
      return f;
    }
  }
  throw DomainError("unknown preset");
}

SpectralField resample(const SpectralField& f, const GridSpec& target) {
  target.validate();
  const GridSpec& src = f.grid();
  if (src.dim != target.dim || src.length != target.length) {
    throw DomainError("resample needs matching dimension and box length");
  }
  auto from = wave_table(src);
  auto to = wave_table(target);
  SpectralField out(target, f.components());
  std::vector<int> k(src.dim);
  const int limit = std::min(src.n, target.n) / 2;
  for (std::size_t m = 0; m < f.modes(); ++m) {
    bool keep = true;
    for (int a = 0; a < src.dim; ++a) {
      k[a] = from->integer_k(a, m);
      if (std::abs(k[a]) >= limit) keep = false;
    }
    if (!keep) continue;
    const std::size_t mt = to->flat_index(k);
    for (int c = 0; c < f.components(); ++c) out.at(c, mt) = f.at(c, m);
  }
  out.set_divergence_free(f.divergence_free());
  return out;
}

}  // namespace fns
