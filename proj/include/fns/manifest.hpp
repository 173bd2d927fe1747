// Copyright 2026 The fnslab Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace fns {

// Ordered flat key-value map with dotted keys ("grid.n", "alpha").
class ParamMap {
 public:
  void set(const std::string& key, const std::string& value);
  std::optional<std::string> get(const std::string& key) const;
  bool contains(const std::string& key) const { return get(key).has_value(); }
  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }
  void merge(const ParamMap& other);  // other's values win

  bool operator==(const ParamMap& other) const { return entries_ == other.entries_; }

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

// Config text: one `key = value` per line, '#' starts a comment, blank lines
// ignored. Throws DomainError with the line number on malformed input.
ParamMap parse_config_text(const std::string& text);
ParamMap read_config_file(const std::filesystem::path& path);

struct Manifest {
  std::string command;
  ParamMap parameters;
  std::uint64_t seed = 0;
  std::string tool_version;
  std::string timestamp;
  std::map<std::string, std::string> input_hashes;  // path -> sha256 hex

  std::string serialize() const;
  static Manifest parse(const std::string& text);

  bool operator==(const Manifest& other) const;
};

std::string tool_version();
// Current UTC time as 2026-01-31T12:34:56Z.
std::string utc_timestamp();
std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::filesystem::path& path);

// Reads a whole file; IoError naming the path on failure.
std::string read_text_file(const std::filesystem::path& path);

}  // namespace fns
