// Copyright 2026 The fnslab Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy at
// http://www.apache.org/licenses/LICENSE-2.0

#include "fns/grid.hpp"

#include <map>
#include <mutex>
#include <string>
#include <tuple>

#include "fns/error.hpp"

namespace fns {

void GridSpec::validate() const {
  if (dim != 2 && dim != 3) {
    throw DomainError("grid dimension must be 2 or 3, got " + std::to_string(dim));
  }
  if (n < 8 || (n & (n - 1)) != 0) {
    throw DomainError("grid size must be a power of two >= 8, got " + std::to_string(n));
  }
  if (!(length > 0.0)) {
    throw DomainError("box length must be positive");
  }
}

WaveTable::WaveTable(const GridSpec& grid) : grid_(grid) {
  grid_.validate();
  const std::size_t total = grid_.size();
  for (int a = 0; a < grid_.dim; ++a) {
    k_[a].resize(total);
    ik_[a].resize(total);
  }
  k2_.resize(total);
  nyquist_.resize(total);
  conj_.resize(total);

  const int n = grid_.n;
  const double dk = grid_.dk();
  std::array<int, 3> idx{0, 0, 0};
  for (std::size_t m = 0; m < total; ++m) {
    std::size_t rest = m;
    for (int a = grid_.dim - 1; a >= 0; --a) {
      idx[a] = static_cast<int>(rest % n);
      rest /= n;
    }
    double k2 = 0.0;
    bool nyq = false;
    std::array<int, 3> neg{0, 0, 0};
    for (int a = 0; a < grid_.dim; ++a) {
      const int k = grid_.wavenumber(idx[a]);
      ik_[a][m] = k;
      k_[a][m] = k * dk;
      k2 += (k * dk) * (k * dk);
      nyq = nyq || (k == -n / 2);
      neg[a] = grid_.index_of(-k);
    }
    k2_[m] = k2;
    nyquist_[m] = nyq ? 1 : 0;
    std::size_t c = 0;
    for (int a = 0; a < grid_.dim; ++a) c = c * n + neg[a];
    conj_[m] = c;
  }
}

std::size_t WaveTable::flat_index(std::span<const int> integer_wavevector) const {
  std::size_t m = 0;
  for (int a = 0; a < grid_.dim; ++a) {
    m = m * grid_.n + grid_.index_of(integer_wavevector[a]);
  }
  return m;
}

std::shared_ptr<const WaveTable> wave_table(const GridSpec& grid) {
  static std::mutex mutex;
  static std::map<std::tuple<int, int, double>, std::shared_ptr<const WaveTable>> cache;
  std::lock_guard lock(mutex);
  auto key = std::make_tuple(grid.dim, grid.n, grid.length);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto table = std::make_shared<const WaveTable>(grid);
  cache.emplace(key, table);
  return table;
}

}  // namespace fns
