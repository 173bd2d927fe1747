// Copyright 2026 The fnslab Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <complex>
#include <span>
#include <vector>

#include "fns/grid.hpp"

namespace fns {

using Complex = std::complex<double>;

// Real samples on the grid, component-major, row-major within a component.
class PhysicalField {
 public:
  PhysicalField() = default;
  PhysicalField(GridSpec grid, int components);

  const GridSpec& grid() const { return grid_; }
  int components() const { return components_; }
  std::size_t points() const { return grid_.size(); }

  std::span<double> component(int c) {
    return {values_.data() + c * points(), points()};
  }
  std::span<const double> component(int c) const {
    return {values_.data() + c * points(), points()};
  }
  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  // Euclidean magnitude of the component vector at sample p.
  double magnitude(std::size_t p) const;
  // Physical coordinate of sample p along an axis.
  double coordinate(int axis, std::size_t p) const;

 private:
  GridSpec grid_;
  int components_ = 0;
  std::vector<double> values_;
};

// Fourier-series coefficients c_k of f(x) = sum_k c_k exp(i k.x), one array
// per component. A vector field carries grid.dim components.
class SpectralField {
 public:
  SpectralField() = default;
  SpectralField(GridSpec grid, int components);

  static SpectralField scalar(const GridSpec& grid) { return {grid, 1}; }
  static SpectralField vector(const GridSpec& grid) { return {grid, grid.dim}; }
  static SpectralField from_physical(const PhysicalField& f);

  PhysicalField to_physical() const;

  const GridSpec& grid() const { return grid_; }
  int components() const { return components_; }
  std::size_t modes() const { return grid_.size(); }
  bool is_vector() const { return components_ == grid_.dim; }

  std::span<Complex> component(int c) {
    return {coeffs_.data() + c * modes(), modes()};
  }
  std::span<const Complex> component(int c) const {
    return {coeffs_.data() + c * modes(), modes()};
  }
  std::span<Complex> coeffs() { return coeffs_; }
  std::span<const Complex> coeffs() const { return coeffs_; }
  Complex& at(int c, std::size_t m) { return coeffs_[c * modes() + m]; }
  const Complex& at(int c, std::size_t m) const { return coeffs_[c * modes() + m]; }

  // Set by projections that guarantee a solenoidal result; cleared by any
  // mutation through the arithmetic helpers below unless both operands carry it.
  bool divergence_free() const { return divergence_free_; }
  void set_divergence_free(bool flag) { divergence_free_ = flag; }

  SpectralField& operator+=(const SpectralField& other);
  SpectralField& operator-=(const SpectralField& other);
  SpectralField& operator*=(double s);
  // this += s * other
  void axpy(double s, const SpectralField& other);

  // True when both fields live on the same grid with the same layout.
  bool compatible(const SpectralField& other) const {
    return grid_ == other.grid_ && components_ == other.components_;
  }

 private:
  GridSpec grid_;
  int components_ = 0;
  bool divergence_free_ = false;
  std::vector<Complex> coeffs_;
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(double s, SpectralField a);

// Largest |c(-k) - conj(c(k))| over all modes and components.
double hermitian_defect(const SpectralField& f);
// Replace every coefficient pair by its Hermitian average so that the field
// is exactly real in physical space.
void enforce_hermitian(SpectralField& f);

// max_k |k . u(k)| / |k| divided by max_k |u(k)|; zero for the zero field.
double divergence_residual(const SpectralField& u);

}  // namespace fns
