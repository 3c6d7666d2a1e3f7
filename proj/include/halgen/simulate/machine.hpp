/*
 * Copyright (c) 2026 halgen contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "halgen/simulate/board.hpp"

namespace halgen {

enum class Severity { Warning, Error };

std::string_view to_string(Severity severity);

struct Diagnostic {
    Severity severity;
    std::string message;
    std::string location;  // "file:line:col", empty when not tied to code
};

struct MachineState {
    std::map<std::string, std::uint32_t> globals;
    /// Every mapped register, starting at its reset value.
    std::map<std::uint32_t, std::uint32_t> mmio;
    std::string usart_log;
    std::uint64_t fuel = 0;  // remaining
    std::uint64_t steps_used = 0;
    std::vector<Diagnostic> diagnostics;
    /// main() ran to completion.
    bool finished = false;
};

struct Scenario {
    /// (peripheral, pin) -> input bits, one consumed per IDR read; the last
    /// value holds once the list is exhausted.
    std::map<std::pair<std::string, unsigned>, std::vector<std::uint8_t>> gpio_inputs;
    std::string expected_log;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> expected_registers;
    /// Register values applied on top of the reset values before main runs.
    std::vector<std::pair<std::uint32_t, std::uint32_t>> register_presets;
    std::uint64_t fuel_limit = 1'000'000;

    void validate() const;
};

/// {"gpio_inputs": {"GPIOA": {"0": [1, 0]}}, "expected_log": "PASS\n",
///  "expected_registers": [{"address": "0x40020014", "value": "0x20"}],
///  "register_presets": [...], "fuel_limit": 1000000}
/// Every key is optional. Throws ConfigError with a field path.
Scenario parse_scenario(std::string_view json_text);
Scenario load_scenario(const std::filesystem::path& path);

struct RegisterMatch {
    std::uint32_t address;
    std::uint32_t expected;
    std::uint32_t actual;
    bool ok;
};

struct CompileStatus {
    std::string command;
    int exit_code = 0;
    std::string output;
};

struct Verdict {
    bool passed = false;
    bool log_match = false;
    std::vector<RegisterMatch> register_matches;
    std::vector<Diagnostic> diagnostics;
    std::uint64_t steps_used = 0;
    std::string usart_log;
    std::string expected_log;
    std::optional<CompileStatus> compile_status;
};

/// passed = log_match, every register matches and no error diagnostics.
Verdict check_scenario(const MachineState& state, const Scenario& scenario);

std::string verdict_to_json(const Verdict& verdict, int indent = 2);

}  // namespace halgen
