// Copyright 2026 The fnslab Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

#include "fns/presets.hpp"
#include "fns/spectral_field.hpp"
#include "fns/spectral_ops.hpp"

namespace fns::testing {

// Random real field with all resolved modes populated, optionally projected.
inline SpectralField random_field(const GridSpec& grid, int components, std::uint64_t seed,
                                  bool solenoidal = false) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  PhysicalField phys(grid, components);
  for (double& v : phys.values()) v = g(rng);
  SpectralField f = SpectralField::from_physical(phys);
  enforce_hermitian(f);
  apply_dealias(f);
  if (solenoidal) f = leray_project(f);
  return f;
}

inline double max_coeff_diff(const SpectralField& a, const SpectralField& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.coeffs().size(); ++i) {
    worst = std::max(worst, std::abs(a.coeffs()[i] - b.coeffs()[i]));
  }
  return worst;
}

inline double max_coeff(const SpectralField& a) {
  double worst = 0.0;
  for (const auto& c : a.coeffs()) worst = std::max(worst, std::abs(c));
  return worst;
}

}  // namespace fns::testing
