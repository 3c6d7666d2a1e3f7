/*
 * Copyright (c) 2026 halgen contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <string>
#include <string_view>

#include "halgen/analysis/project.hpp"
#include "halgen/simulate/machine.hpp"

namespace halgen {

/// All units in one file, HAL unit first so definitions precede their uses.
std::string concatenate_units(const Project& project);

/// Writes the concatenated program to a temporary .c file, substitutes its
/// path for `{file}` in `command_template` (appending it when absent) and
/// runs the command through the shell. Output is captured, not echoed.
CompileStatus run_compile_check(const Project& project, std::string_view command_template);

}  // namespace halgen
