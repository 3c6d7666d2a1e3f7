/*
 * Copyright (c) 2026 halgen contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace halgen {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;           // parse, I/O and internal errors
inline constexpr int kExitSimSetup = 2;        // simulation could not start
inline constexpr int kExitGaps = 3;            // analyze found missing elements
inline constexpr int kExitNotCompleted = 4;    // completion did not close the project
inline constexpr int kExitVerdictFailed = 5;   // scenario or experiment failed
inline constexpr int kExitUsage = 64;          // bad arguments or configuration

/// halgen <analyze|index|complete|simulate|experiment> [args] [--config PATH]
///   [--backend kb|http] [--seed N] [--strict] [--iterations N]
///   [--compile-cmd CMD] [--out PATH] [--index PATH]
/// `args` includes the program name. Returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace halgen
