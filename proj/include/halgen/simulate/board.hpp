/*
 * Copyright (c) 2026 halgen contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace halgen {

enum class RegisterBehavior { Plain, UsartSr, UsartDr, GpioIdr };

std::string_view to_string(RegisterBehavior behavior);

struct RegisterDef {
    std::string name;
    std::uint32_t offset = 0;
    std::uint32_t reset_value = 0;
    RegisterBehavior behavior = RegisterBehavior::Plain;
};

struct ClockEnable {
    std::string peripheral;
    std::string register_name;
    unsigned bit = 0;
};

struct PeripheralDef {
    std::string name;
    std::uint32_t base_address = 0;
    /// Decoded address range; defaults to the last register offset + 4.
    std::uint32_t size = 0;
    std::optional<ClockEnable> clock_enable;
    std::vector<RegisterDef> registers;

    const RegisterDef* find_register(std::string_view name) const;
};

struct BoardMap {
    std::string name;
    std::vector<PeripheralDef> peripherals;

    const PeripheralDef* find_peripheral(std::string_view name) const;
    /// Peripheral whose decoded range contains `address`.
    const PeripheralDef* peripheral_at(std::uint32_t address) const;
    /// Throws ConfigError (with field path) on duplicate names or addresses,
    /// overlapping ranges, registers outside their range, or bad clock references.
    void validate() const;
};

/// Internal RAM used for program variables; must not overlap any peripheral.
inline constexpr std::uint32_t kRamBase = 0x20000000;
inline constexpr std::uint32_t kRamSize = 0x20000;

/// Numbers may be JSON integers or strings in decimal or 0x-hex.
BoardMap parse_board_map(std::string_view json_text);
BoardMap load_board_map(const std::filesystem::path& path);

/// Built-in "stm32f407" map: RCC, GPIOA, GPIOD, USART2.
const BoardMap& default_board_map();
std::string_view default_board_map_json();

}  // namespace halgen
