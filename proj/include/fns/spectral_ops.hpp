// Copyright 2026 The fnslab Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fns/spectral_field.hpp"

namespace fns {

// Fourier multiplier |xi|^alpha of the fractional Laplacian, alpha in (1, 2].
class FractionalSymbol {
 public:
  explicit FractionalSymbol(double alpha);

  double alpha() const { return alpha_; }
  // Evaluates from the squared magnitude. alpha == 2 returns k2 unchanged so
  // the classical path is bit-identical to a plain Laplacian.
  double from_k2(double k2) const;

 private:
  double alpha_;
};

double symbol_eval(const FractionalSymbol& sym, std::span<const double> xi);

// u - xi (xi . u) / |xi|^2 per mode, identity on the mean, zero on Nyquist modes.
SpectralField leray_project(const SpectralField& u);

// i xi_axis / |xi| per mode (axis is zero-based); the mean and Nyquist modes map to 0.
SpectralField riesz_transform(const SpectralField& f, int axis);

// Two-thirds rule: keep modes with 3 |k_j| < n on every axis.
std::vector<std::uint8_t> dealias_mask(const GridSpec& grid);
void apply_dealias(SpectralField& f);

SpectralField gradient(const SpectralField& scalar);
SpectralField divergence(const SpectralField& vector);

// Dealiased div(u (x) v), component i = sum_j d_j (u_j v_i), which equals
// (u . grad) v when u is solenoidal. Products are formed in physical space.
SpectralField nonlinear_advection(const SpectralField& u, const SpectralField& v);

// Same as nonlinear_advection but starting from physical samples already at hand.
SpectralField nonlinear_advection(const PhysicalField& u, const PhysicalField& v);

}  // namespace fns
