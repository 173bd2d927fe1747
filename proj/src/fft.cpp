// Copyright 2026 The fnslab Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy at
// http://www.apache.org/licenses/LICENSE-2.0

#include "fns/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

#include "fns/error.hpp"

namespace fns::fft {
namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

class Plan {
 public:
  Plan(const GridSpec& grid, int sign) {
    int dims[3] = {grid.n, grid.n, grid.n};
    const std::size_t total = grid.size();
    std::lock_guard lock(planner_mutex());
    auto* scratch = fftw_alloc_complex(total);
    plan_ = fftw_plan_dft(grid.dim, dims, scratch, scratch, sign,
                          FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(scratch);
    if (plan_ == nullptr) throw NumericalError("FFTW planning failed");
  }
  Plan(const Plan&) = delete;
  Plan& operator=(const Plan&) = delete;
  ~Plan() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan_);
  }
  void execute(std::complex<double>* data) const {
    auto* p = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(plan_, p, p);
  }

 private:
  fftw_plan plan_ = nullptr;
};

const Plan& plan_for(const GridSpec& grid, int sign) {
  thread_local std::map<std::tuple<int, int, int>, std::unique_ptr<Plan>> plans;
  auto key = std::make_tuple(grid.dim, grid.n, sign);
  auto it = plans.find(key);
  if (it == plans.end()) {
    it = plans.emplace(key, std::make_unique<Plan>(grid, sign)).first;
  }
  return *it->second;
}

void check(const GridSpec& grid, std::span<std::complex<double>> data) {
  if (data.size() != grid.size()) throw DomainError("FFT buffer does not match grid size");
}

}  // namespace

void forward(const GridSpec& grid, std::span<std::complex<double>> data) {
  check(grid, data);
  plan_for(grid, FFTW_FORWARD).execute(data.data());
}

void backward(const GridSpec& grid, std::span<std::complex<double>> data) {
  check(grid, data);
  plan_for(grid, FFTW_BACKWARD).execute(data.data());
}

}  // namespace fns::fft
