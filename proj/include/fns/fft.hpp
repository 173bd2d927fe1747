// Copyright 2026 The fnslab Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <complex>
#include <span>

#include "fns/grid.hpp"

namespace fns::fft {

// In-place multidimensional complex transforms over one component
// (grid.size() values). Unnormalized: backward(forward(x)) == N * x.
// Plans are cached per thread; planning itself is serialized.
void forward(const GridSpec& grid, std::span<std::complex<double>> data);
void backward(const GridSpec& grid, std::span<std::complex<double>> data);

}  // namespace fns::fft
