// Copyright 2026 The fnslab Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy at
// http://www.apache.org/licenses/LICENSE-2.0

#include "fns/manifest.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <memory>
#include <sstream>

#include "fns/error.hpp"

namespace fns {

void ParamMap::set(const std::string& key, const std::string& value) {
  for (auto& [k, v] : entries_) {
    if (k == key) {
      v = value;
      return;
    }
  }
  entries_.emplace_back(key, value);
}

std::optional<std::string> ParamMap::get(const std::string& key) const {
  for (const auto& [k, v] : entries_) {
    if (k == key) return v;
  }
  return std::nullopt;
}

void ParamMap::merge(const ParamMap& other) {
  for (const auto& [k, v] : other.entries_) set(k, v);
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '=': out += "\\="; break;
      default: out += c;
    }
  }
  return out;
}

std::string unescape(const std::string& s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '\\' || i + 1 == s.size()) {
      out += s[i];
      continue;
    }
    const char n = s[++i];
    out += n == 'n' ? '\n' : n == 'r' ? '\r' : n;
  }
  return out;
}

// Position of the first '=' not preceded by a backslash escape.
std::size_t split_point(const std::string& line) {
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '\\') {
      ++i;
    } else if (line[i] == '=') {
      return i;
    }
  }
  return std::string::npos;
}

}  // namespace

ParamMap parse_config_text(const std::string& text) {
  ParamMap out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw DomainError("config line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw DomainError("config line " + std::to_string(lineno) + ": empty key");
    out.set(key, trim(line.substr(eq + 1)));
  }
  return out;
}

ParamMap read_config_file(const std::filesystem::path& path) {
  return parse_config_text(read_text_file(path));
}

std::string Manifest::serialize() const {
  std::ostringstream os;
  os << "fnslab-manifest 1\n";
  os << "command=" << escape(command) << "\n";
  os << "seed=" << seed << "\n";
  os << "tool_version=" << escape(tool_version) << "\n";
  os << "timestamp=" << escape(timestamp) << "\n";
  for (const auto& [k, v] : parameters.entries()) os << "param." << escape(k) << "=" << escape(v) << "\n";
  for (const auto& [k, v] : input_hashes) os << "input." << escape(k) << "=" << escape(v) << "\n";
  return os.str();
}

Manifest Manifest::parse(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "fnslab-manifest 1") {
    throw DomainError("not an fnslab manifest");
  }
  Manifest m;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto eq = split_point(line);
    if (eq == std::string::npos) {
      throw DomainError("manifest line " + std::to_string(lineno) + ": missing '='");
    }
    const std::string key = unescape(line.substr(0, eq));
    const std::string value = unescape(line.substr(eq + 1));
    if (key == "command") {
      m.command = value;
    } else if (key == "seed") {
      m.seed = std::stoull(value);
    } else if (key == "tool_version") {
      m.tool_version = value;
    } else if (key == "timestamp") {
      m.timestamp = value;
    } else if (key.rfind("param.", 0) == 0) {
      m.parameters.set(key.substr(6), value);
    } else if (key.rfind("input.", 0) == 0) {
      m.input_hashes[key.substr(6)] = value;
    } else {
      throw DomainError("manifest line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }
  return m;
}

bool Manifest::operator==(const Manifest& o) const {
  return command == o.command && parameters == o.parameters && seed == o.seed &&
         tool_version == o.tool_version && timestamp == o.timestamp &&
         input_hashes == o.input_hashes;
}

std::string tool_version() { return "fnslab 0.3.0"; }

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

std::string sha256_hex(const std::string& bytes) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest, &len) != 1) {
    throw NumericalError("sha256 digest failed");
  }
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) {
    os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  }
  return os.str();
}

std::string sha256_file(const std::filesystem::path& path) { return sha256_hex(read_text_file(path)); }

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream os;
  os << in.rdbuf();
  if (in.bad()) throw IoError("read failed for '" + path.string() + "'");
  return os.str();
}

}  // namespace fns
