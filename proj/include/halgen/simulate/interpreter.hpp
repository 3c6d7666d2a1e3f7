/*
 * Copyright (c) 2026 halgen contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include "halgen/analysis/project.hpp"
#include "halgen/simulate/board.hpp"
#include "halgen/simulate/machine.hpp"

namespace halgen {

struct ExecOptions {
    /// Clock-gating violations become errors, and USART DR writes only reach
    /// the log once CR1.TE (bit 3) is set.
    bool strict = true;
    int max_call_depth = 256;
};

struct ExecResult {
    MachineState state;
    Verdict verdict;
};

/// Runs main() of a closed project on the board. Values are 32 bits wide;
/// u8/u16 promote to i32 and comparisons are signed only when both operands
/// are i32. Program variables live in RAM at kRamBase. Throws SimSetupError
/// if main is missing or takes parameters, or if the project has missing
/// elements; ConfigError if the scenario names unknown pins or registers.
ExecResult exec_program(const Project& project, const BoardMap& board, const Scenario& scenario,
                        const ExecOptions& options = {});

}  // namespace halgen
