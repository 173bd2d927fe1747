// Copyright 2026 The fnslab Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy at
// http://www.apache.org/licenses/LICENSE-2.0

#include "fns/spectral_field.hpp"

#include <algorithm>
#include <cmath>

#include "fns/error.hpp"
#include "fns/fft.hpp"

namespace fns {

PhysicalField::PhysicalField(GridSpec grid, int components)
    : grid_(grid), components_(components) {
  grid_.validate();
  if (components < 1) throw DomainError("field needs at least one component");
  values_.assign(static_cast<std::size_t>(components) * grid_.size(), 0.0);
}

double PhysicalField::magnitude(std::size_t p) const {
  double s = 0.0;
  for (int c = 0; c < components_; ++c) {
    const double v = values_[c * points() + p];
    s += v * v;
  }
  return std::sqrt(s);
}

double PhysicalField::coordinate(int axis, std::size_t p) const {
  std::size_t rest = p;
  for (int a = grid_.dim - 1; a > axis; --a) rest /= grid_.n;
  return static_cast<double>(rest % grid_.n) * grid_.dx();
}

SpectralField::SpectralField(GridSpec grid, int components)
    : grid_(grid), components_(components) {
  grid_.validate();
  if (components < 1) throw DomainError("field needs at least one component");
  coeffs_.assign(static_cast<std::size_t>(components) * grid_.size(), Complex{});
}

SpectralField SpectralField::from_physical(const PhysicalField& f) {
  SpectralField out(f.grid(), f.components());
  const double inv = 1.0 / static_cast<double>(f.points());
  for (int c = 0; c < f.components(); ++c) {
    auto dst = out.component(c);
    auto src = f.component(c);
    for (std::size_t p = 0; p < src.size(); ++p) dst[p] = Complex(src[p], 0.0);
    fft::forward(out.grid_, dst);
    for (auto& v : dst) v *= inv;
  }
  return out;
}

PhysicalField SpectralField::to_physical() const {
  PhysicalField out(grid_, components_);
  std::vector<Complex> work(modes());
  for (int c = 0; c < components_; ++c) {
    auto src = component(c);
    std::copy(src.begin(), src.end(), work.begin());
    fft::backward(grid_, work);
    auto dst = out.component(c);
    for (std::size_t p = 0; p < work.size(); ++p) dst[p] = work[p].real();
  }
  return out;
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
  axpy(1.0, other);
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
  axpy(-1.0, other);
  return *this;
}

SpectralField& SpectralField::operator*=(double s) {
  for (auto& v : coeffs_) v *= s;
  return *this;
}

void SpectralField::axpy(double s, const SpectralField& other) {
  if (!compatible(other)) throw DomainError("field grid or component mismatch");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += s * other.coeffs_[i];
  divergence_free_ = divergence_free_ && other.divergence_free_;
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator*(double s, SpectralField a) { return a *= s; }

double hermitian_defect(const SpectralField& f) {
  auto table = wave_table(f.grid());
  double worst = 0.0;
  for (int c = 0; c < f.components(); ++c) {
    auto v = f.component(c);
    for (std::size_t m = 0; m < v.size(); ++m) {
      worst = std::max(worst, std::abs(v[table->conjugate_index(m)] - std::conj(v[m])));
    }
  }
  return worst;
}

void enforce_hermitian(SpectralField& f) {
  auto table = wave_table(f.grid());
  for (int c = 0; c < f.components(); ++c) {
    auto v = f.component(c);
    for (std::size_t m = 0; m < v.size(); ++m) {
      const std::size_t p = table->conjugate_index(m);
      if (p < m) continue;
      const Complex avg = 0.5 * (v[m] + std::conj(v[p]));
      v[m] = avg;
      v[p] = std::conj(avg);
    }
  }
}

double divergence_residual(const SpectralField& u) {
  if (!u.is_vector()) throw DomainError("divergence of a non-vector field");
  auto table = wave_table(u.grid());
  double worst = 0.0;
  double scale = 0.0;
  for (std::size_t m = 0; m < u.modes(); ++m) {
    double mag2 = 0.0;
    Complex dot{};
    for (int a = 0; a < u.components(); ++a) {
      dot += table->k(a, m) * u.at(a, m);
      mag2 += std::norm(u.at(a, m));
    }
    scale = std::max(scale, std::sqrt(mag2));
    if (table->k2(m) > 0.0) worst = std::max(worst, std::abs(dot) / std::sqrt(table->k2(m)));
  }
  return scale > 0.0 ? worst / scale : 0.0;
}

}  // namespace fns
