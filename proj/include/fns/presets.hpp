// Copyright 2026 The fnslab Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <string>

#include "fns/spectral_field.hpp"

namespace fns {

enum class PresetKind { taylor_green, random_smooth, shear, zero };

struct PresetSpec {
  PresetKind kind = PresetKind::taylor_green;
  double amplitude = 1.0;
  int wavenumber = 1;  // taylor_green / shear
  std::uint64_t seed = 20240611;
  double spectrum_decay = 4.0;  // random_smooth: |c_k| ~ |k|^-decay
  int kmax = 6;                 // random_smooth: |k_j| <= kmax on every axis

  std::string name() const;
};

PresetKind parse_preset(const std::string& name);

// Divergence-free, dealiased initial velocity on the grid.
//  taylor_green: 2D A(sin kx cos ky, -cos kx sin ky);
//                3D A(sin kx cos ky cos kz, -cos kx sin ky cos kz, 0).
//  shear:        A(sin ky, sin kx / 2 [, 0]).
//  random_smooth: random solenoidal field with amplitude |k|^-decay, scaled so
//                 its sup norm is A. The draw depends on the seed and kmax
//                 only, and the scale is measured on a fixed reference grid,
//                 so the same function is produced on every resolution that
//                 resolves kmax.
SpectralField make_preset(const GridSpec& grid, const PresetSpec& spec);

SpectralField taylor_green(const GridSpec& grid, double amplitude = 1.0, int k = 1);
// Closed-form 2D Taylor-Green velocity under nu |xi|^alpha dissipation.
SpectralField taylor_green_exact(const GridSpec& grid, double t, double alpha = 2.0,
                                 double amplitude = 1.0, int k = 1);
SpectralField random_solenoidal(const GridSpec& grid, std::uint64_t seed, double decay = 4.0,
                                int kmax = 6);

// Zero-pad (or truncate) spectral coefficients onto another grid with the
// same dimension and box length.
SpectralField resample(const SpectralField& f, const GridSpec& target);

}  // namespace fns
