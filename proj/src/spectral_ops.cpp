// Copyright 2026 The fnslab Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy at
// http://www.apache.org/licenses/LICENSE-2.0

#include "fns/spectral_ops.hpp"

#include <cmath>
#include <string>

#include "fns/error.hpp"

namespace fns {

FractionalSymbol::FractionalSymbol(double alpha) : alpha_(alpha) {
  if (!(alpha > 1.0 && alpha <= 2.0)) {
    throw DomainError("fractional order must lie in (1, 2], got " + std::to_string(alpha));
  }
}

double FractionalSymbol::from_k2(double k2) const {
  if (alpha_ == 2.0) return k2;
  if (k2 == 0.0) return 0.0;
  return std::pow(k2, 0.5 * alpha_);
}

double symbol_eval(const FractionalSymbol& sym, std::span<const double> xi) {
  double k2 = 0.0;
  for (double v : xi) k2 += v * v;
  return sym.from_k2(k2);
}

SpectralField leray_project(const SpectralField& u) {
  if (!u.is_vector()) throw DomainError("Leray projection needs a vector field");
  auto table = wave_table(u.grid());
  const int dim = u.components();
  SpectralField out(u.grid(), dim);
  for (std::size_t m = 0; m < u.modes(); ++m) {
    const double k2 = table->k2(m);
    if (k2 == 0.0) {
      for (int a = 0; a < dim; ++a) out.at(a, m) = u.at(a, m);
      continue;
    }
    if (table->nyquist(m)) continue;
    Complex dot{};
    for (int a = 0; a < dim; ++a) dot += table->k(a, m) * u.at(a, m);
    dot /= k2;
    for (int a = 0; a < dim; ++a) out.at(a, m) = u.at(a, m) - table->k(a, m) * dot;
  }
  out.set_divergence_free(true);
  return out;
}

SpectralField riesz_transform(const SpectralField& f, int axis) {
  if (f.components() != 1) throw DomainError("Riesz transform needs a scalar field");
  if (axis < 0 || axis >= f.grid().dim) throw DomainError("Riesz axis out of range");
  auto table = wave_table(f.grid());
  SpectralField out(f.grid(), 1);
  auto src = f.component(0);
  auto dst = out.component(0);
  for (std::size_t m = 0; m < f.modes(); ++m) {
    const double k2 = table->k2(m);
    if (k2 == 0.0 || table->nyquist(m)) continue;
    dst[m] = Complex(0.0, table->k(axis, m) / std::sqrt(k2)) * src[m];
  }
  return out;
}

std::vector<std::uint8_t> dealias_mask(const GridSpec& grid) {
  auto table = wave_table(grid);
  std::vector<std::uint8_t> mask(grid.size(), 1);
  for (std::size_t m = 0; m < mask.size(); ++m) {
    for (int a = 0; a < grid.dim; ++a) {
      if (3 * std::abs(table->integer_k(a, m)) >= grid.n) {
        mask[m] = 0;
        break;
      }
    }
  }
  return mask;
}

void apply_dealias(SpectralField& f) {
  const auto mask = dealias_mask(f.grid());
  for (int c = 0; c < f.components(); ++c) {
    auto v = f.component(c);
    for (std::size_t m = 0; m < v.size(); ++m) {
      if (!mask[m]) v[m] = Complex{};
    }
  }
}

SpectralField gradient(const SpectralField& scalar) {
  if (scalar.components() != 1) throw DomainError("gradient needs a scalar field");
  auto table = wave_table(scalar.grid());
  SpectralField out = SpectralField::vector(scalar.grid());
  auto src = scalar.component(0);
  for (int a = 0; a < scalar.grid().dim; ++a) {
    auto dst = out.component(a);
    for (std::size_t m = 0; m < src.size(); ++m) {
      if (table->nyquist(m)) continue;
      dst[m] = Complex(0.0, table->k(a, m)) * src[m];
    }
  }
  return out;
}

SpectralField divergence(const SpectralField& vector) {
  if (!vector.is_vector()) throw DomainError("divergence needs a vector field");
  auto table = wave_table(vector.grid());
  SpectralField out = SpectralField::scalar(vector.grid());
  auto dst = out.component(0);
  for (int a = 0; a < vector.components(); ++a) {
    auto src = vector.component(a);
    for (std::size_t m = 0; m < src.size(); ++m) {
      if (table->nyquist(m)) continue;
      dst[m] += Complex(0.0, table->k(a, m)) * src[m];
    }
  }
  return out;
}

SpectralField nonlinear_advection(const PhysicalField& u, const PhysicalField& v) {
  if (!(u.grid() == v.grid())) throw DomainError("nonlinear term: grid mismatch");
  const GridSpec& grid = u.grid();
  const int dim = grid.dim;
  if (u.components() != dim || v.components() != dim) {
    throw DomainError("nonlinear term needs two vector fields");
  }
  auto table = wave_table(grid);
  const auto mask = dealias_mask(grid);
  const std::size_t points = grid.size();

  SpectralField out = SpectralField::vector(grid);
  PhysicalField product(grid, 1);
  for (int i = 0; i < dim; ++i) {
    auto vi = v.component(i);
    for (int j = 0; j < dim; ++j) {
      auto uj = u.component(j);
      auto pij = product.component(0);
      for (std::size_t p = 0; p < points; ++p) pij[p] = uj[p] * vi[p];
      const SpectralField hat = SpectralField::from_physical(product);
      auto src = hat.component(0);
      auto dst = out.component(i);
      for (std::size_t m = 0; m < points; ++m) {
        if (!mask[m]) continue;
        dst[m] += Complex(0.0, table->k(j, m)) * src[m];
      }
    }
  }
  return out;
}

SpectralField nonlinear_advection(const SpectralField& u, const SpectralField& v) {
  if (!(u.grid() == v.grid())) throw DomainError("nonlinear term: grid mismatch");
  return nonlinear_advection(u.to_physical(), v.to_physical());
}

}  // namespace fns
