// Copyright 2026 The fnslab Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy at
// http://www.apache.org/licenses/LICENSE-2.0

#include "fns/snapshot_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "fns/error.hpp"

namespace fns {

static_assert(std::endian::native == std::endian::little,
              "snapshot encoding assumes a little-endian host");

namespace {

template <typename T>
void put(std::vector<char>& out, std::size_t offset, T value) {
  std::memcpy(out.data() + offset, &value, sizeof(T));
}

template <typename T>
T get(const std::vector<char>& in, std::size_t offset) {
  T value;
  std::memcpy(&value, in.data() + offset, sizeof(T));
  return value;
}

}  // namespace

std::vector<char> encode_snapshot(const PhysicalField& field, double alpha) {
  const auto values = field.values();
  std::vector<char> out(kSnapshotHeaderBytes + values.size() * sizeof(double), 0);
  std::memcpy(out.data(), "FNSF", 4);
  put<std::uint32_t>(out, 4, kSnapshotVersion);
  put<std::uint32_t>(out, 8, static_cast<std::uint32_t>(field.grid().dim));
  put<std::uint32_t>(out, 12, static_cast<std::uint32_t>(field.grid().n));
  put<std::uint32_t>(out, 16, static_cast<std::uint32_t>(field.components()));
  put<std::uint32_t>(out, 20, 0u);
  put<double>(out, 24, alpha);
  std::memcpy(out.data() + kSnapshotHeaderBytes, values.data(), values.size() * sizeof(double));
  return out;
}

Snapshot decode_snapshot(const std::vector<char>& bytes, double box_length) {
  if (bytes.size() < kSnapshotHeaderBytes || std::memcmp(bytes.data(), "FNSF", 4) != 0) {
    throw IoError("not an FNSF snapshot");
  }
  const auto version = get<std::uint32_t>(bytes, 4);
  if (version != kSnapshotVersion) {
    throw IoError("unsupported FNSF version " + std::to_string(version));
  }
  GridSpec grid;
  grid.dim = static_cast<int>(get<std::uint32_t>(bytes, 8));
  grid.n = static_cast<int>(get<std::uint32_t>(bytes, 12));
  grid.length = box_length;
  const auto components = static_cast<int>(get<std::uint32_t>(bytes, 16));
  grid.validate();
  Snapshot snap{PhysicalField(grid, components), get<double>(bytes, 24)};
  auto values = snap.field.values();
  if (bytes.size() != kSnapshotHeaderBytes + values.size() * sizeof(double)) {
    throw IoError("FNSF payload size does not match header");
  }
  std::memcpy(values.data(), bytes.data() + kSnapshotHeaderBytes, values.size() * sizeof(double));
  return snap;
}

void write_snapshot(const std::filesystem::path& path, const SpectralField& field, double alpha) {
  const auto bytes = encode_snapshot(field.to_physical(), alpha);
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!os) throw IoError("short write to " + path.string());
}

Snapshot read_snapshot(const std::filesystem::path& path, double box_length) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path.string());
  std::vector<char> bytes((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  try {
    return decode_snapshot(bytes, box_length);
  } catch (const IoError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

}  // namespace fns
