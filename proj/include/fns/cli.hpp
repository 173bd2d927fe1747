// Copyright 2026 The fnslab Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "fns/manifest.hpp"

namespace fns {

enum ExitCode : int { kExitOk = 0, kExitNumerical = 1, kExitUsage = 2, kExitIo = 3 };

inline const std::vector<std::string>& cli_commands() {
  static const std::vector<std::string> names{"kernel-distance", "solve",        "solve-mhd", "norm",
                                              "converge",        "converge-mhd", "fit"};
  return names;
}

struct ParsedCommand {
  std::string command;
  Manifest manifest;  // effective parameters after config and flag merge
  bool force = false;
  bool help = false;
  std::string help_text;
};

// Parses argv (without the program name). `--config FILE` values are merged
// under explicit flags. Throws DomainError on usage problems, including a
// missing required parameter, which is named by its flag.
ParsedCommand parse_cli(const std::vector<std::string>& args);

// Parses and executes; returns the process exit status.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fns
