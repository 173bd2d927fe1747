// Copyright 2026 The fnslab Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "fns/spectral_field.hpp"

namespace fns {

// Binary field snapshot ("FNSF"). Little-endian, 32-byte header:
//   offset  0  char[4]  magic "FNSF"
//   offset  4  u32      version (1)
//   offset  8  u32      dim
//   offset 12  u32      n
//   offset 16  u32      components
//   offset 20  u32      reserved, written as 0
//   offset 24  f64      alpha
// followed by dim-dimensional physical samples as f64, component-major and
// row-major within each component (last axis fastest).
inline constexpr std::uint32_t kSnapshotVersion = 1;
inline constexpr std::size_t kSnapshotHeaderBytes = 32;

struct Snapshot {
  PhysicalField field;
  double alpha = 2.0;
};

std::vector<char> encode_snapshot(const PhysicalField& field, double alpha);
// The header has no box length, so the caller supplies it.
Snapshot decode_snapshot(const std::vector<char>& bytes, double box_length);

void write_snapshot(const std::filesystem::path& path, const SpectralField& field, double alpha);
Snapshot read_snapshot(const std::filesystem::path& path, double box_length);

}  // namespace fns
