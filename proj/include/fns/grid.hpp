// Copyright 2026 The fnslab Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <numbers>
#include <span>
#include <vector>

namespace fns {

// Uniform periodic grid on the torus [0, L)^dim.
struct GridSpec {
  int dim = 2;
  int n = 64;
  double length = 2.0 * std::numbers::pi;

  // Throws DomainError unless dim is 2 or 3, n >= 8 is a power of two and
  // length > 0.
  void validate() const;

  std::size_t size() const {
    std::size_t s = 1;
    for (int d = 0; d < dim; ++d) s *= static_cast<std::size_t>(n);
    return s;
  }
  double dk() const { return 2.0 * std::numbers::pi / length; }
  double dx() const { return length / n; }
  // Signed integer wavenumber of FFT index i, in [-n/2, n/2).
  int wavenumber(int i) const { return i < n / 2 ? i : i - n; }
  // FFT index of signed wavenumber k (taken modulo n).
  int index_of(int k) const { return ((k % n) + n) % n; }

  bool operator==(const GridSpec&) const = default;
};

// Per-mode wavevector tables for a grid. Flat mode index m follows the
// row-major layout of the physical samples (last axis fastest).
class WaveTable {
 public:
  explicit WaveTable(const GridSpec& grid);

  const GridSpec& grid() const { return grid_; }
  std::size_t size() const { return k2_.size(); }
  // Physical wavenumber component k_axis * (2 pi / L).
  double k(int axis, std::size_t m) const { return k_[axis][m]; }
  int integer_k(int axis, std::size_t m) const { return ik_[axis][m]; }
  double k2(std::size_t m) const { return k2_[m]; }
  std::span<const double> k2() const { return k2_; }
  // True when some component sits at the unsigned Nyquist index -n/2.
  bool nyquist(std::size_t m) const { return nyquist_[m] != 0; }
  // Flat index of the mode -xi (the Hermitian partner of m).
  std::size_t conjugate_index(std::size_t m) const { return conj_[m]; }
  std::size_t flat_index(std::span<const int> integer_wavevector) const;

 private:
  GridSpec grid_;
  std::array<std::vector<double>, 3> k_;
  std::array<std::vector<int>, 3> ik_;
  std::vector<double> k2_;
  std::vector<std::uint8_t> nyquist_;
  std::vector<std::size_t> conj_;
};

// Shared, immutable table for a grid; safe to call from any thread.
std::shared_ptr<const WaveTable> wave_table(const GridSpec& grid);

}  // namespace fns
