/*
 * Copyright (c) 2026 halgen contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */
#include "halgen/simulate/board.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <map>
#include <set>

#include <json.hpp>

#include "halgen/error.hpp"

namespace halgen {

std::string_view to_string(RegisterBehavior behavior) {
    switch (behavior) {
        case RegisterBehavior::Plain: return "plain";
        case RegisterBehavior::UsartSr: return "usart_sr";
        case RegisterBehavior::UsartDr: return "usart_dr";
        case RegisterBehavior::GpioIdr: return "gpio_idr";
    }
    return "?";
}

const RegisterDef* PeripheralDef::find_register(std::string_view n) const {
    for (const auto& r : registers) {
        if (r.name == n) return &r;
    }
    return nullptr;
}

const PeripheralDef* BoardMap::find_peripheral(std::string_view n) const {
    for (const auto& p : peripherals) {
        if (p.name == n) return &p;
    }
    return nullptr;
}

const PeripheralDef* BoardMap::peripheral_at(std::uint32_t address) const {
    for (const auto& p : peripherals) {
        if (address >= p.base_address && address - p.base_address < p.size) return &p;
    }
    return nullptr;
}

void BoardMap::validate() const {
    std::set<std::string> names;
    std::map<std::uint64_t, std::string> addresses;
    for (std::size_t i = 0; i < peripherals.size(); ++i) {
        const auto& p = peripherals[i];
        const std::string field = "peripherals[" + std::to_string(i) + "]";
        if (p.name.empty()) throw ConfigError(field + ".name", "must not be empty");
        if (!names.insert(p.name).second) throw ConfigError(field + ".name", "duplicate peripheral '" + p.name + "'");
        if (p.size == 0) throw ConfigError(field + ".size", "must be positive");
        const std::uint64_t end = std::uint64_t{p.base_address} + p.size;
        if (end > 0x100000000ULL) throw ConfigError(field + ".size", "range runs past the 32-bit address space");
        if (p.base_address < std::uint64_t{kRamBase} + kRamSize && end > kRamBase) {
            throw ConfigError(field + ".base_address", "overlaps program RAM");
        }
        for (std::size_t j = 0; j < i; ++j) {
            const auto& q = peripherals[j];
            if (p.base_address < std::uint64_t{q.base_address} + q.size && q.base_address < end) {
                throw ConfigError(field + ".base_address", "range overlaps peripheral '" + q.name + "'");
            }
        }
        std::set<std::string> reg_names;
        for (std::size_t k = 0; k < p.registers.size(); ++k) {
            const auto& r = p.registers[k];
            const std::string rfield = field + ".registers[" + std::to_string(k) + "]";
            if (!reg_names.insert(r.name).second) throw ConfigError(rfield + ".name", "duplicate register '" + r.name + "'");
            if (r.offset % 4 != 0) throw ConfigError(rfield + ".offset", "must be word aligned");
            if (std::uint64_t{r.offset} + 4 > p.size) throw ConfigError(rfield + ".offset", "outside the peripheral range");
            const std::uint64_t addr = std::uint64_t{p.base_address} + r.offset;
            if (auto [it, fresh] = addresses.emplace(addr, p.name + "." + r.name); !fresh) {
                throw ConfigError(rfield + ".offset", "address already used by " + it->second);
            }
        }
    }
    for (std::size_t i = 0; i < peripherals.size(); ++i) {
        const auto& p = peripherals[i];
        if (!p.clock_enable) continue;
        const std::string field = "peripherals[" + std::to_string(i) + "].clock_enable";
        const auto* owner = find_peripheral(p.clock_enable->peripheral);
        if (!owner) throw ConfigError(field + ".peripheral", "unknown peripheral '" + p.clock_enable->peripheral + "'");
        if (!owner->find_register(p.clock_enable->register_name)) {
            throw ConfigError(field + ".register", "unknown register '" + p.clock_enable->register_name + "'");
        }
        if (p.clock_enable->bit > 31) throw ConfigError(field + ".bit", "must be in [0, 31]");
    }
}

namespace {

std::uint64_t number(const nlohmann::json& v, const std::string& field) {
    if (v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
        return v.get<std::uint64_t>();
    }
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        try {
            std::size_t used = 0;
            const bool hex = s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X');
            const std::uint64_t n = std::stoull(s, &used, hex ? 16 : 10);
            if (used == s.size() && !s.empty() && s[0] != '-' && s[0] != '+') return n;
        } catch (const std::logic_error&) {
        }
    }
    throw ConfigError(field, "expected a non-negative number or numeric string");
}

std::uint32_t u32(const nlohmann::json& v, const std::string& field) {
    const auto n = number(v, field);
    if (n > 0xFFFFFFFFULL) throw ConfigError(field, "does not fit in 32 bits");
    return static_cast<std::uint32_t>(n);
}

const nlohmann::json& required(const nlohmann::json& obj, const char* key, const std::string& field) {
    if (!obj.is_object() || !obj.contains(key)) throw ConfigError(field + "." + key, "is required");
    return obj.at(key);
}

std::string str(const nlohmann::json& v, const std::string& field) {
    if (!v.is_string()) throw ConfigError(field, "expected a string");
    return v.get<std::string>();
}

RegisterBehavior behavior(const std::string& s, const std::string& field) {
    for (auto b : {RegisterBehavior::Plain, RegisterBehavior::UsartSr, RegisterBehavior::UsartDr, RegisterBehavior::GpioIdr}) {
        if (to_string(b) == s) return b;
    }
    throw ConfigError(field, "unknown behavior '" + s + "'");
}

constexpr std::string_view kDefaultMap = R"({
  "name": "stm32f407",
  "peripherals": [
    {
      "name": "RCC",
      "base_address": "0x40023800",
      "size": "0x400",
      "registers": [
        {"name": "AHB1ENR", "offset": "0x30", "reset_value": "0x00100000", "behavior": "plain"},
        {"name": "APB1ENR", "offset": "0x40", "reset_value": "0x00000000", "behavior": "plain"}
      ]
    },
    {
      "name": "GPIOA",
      "base_address": "0x40020000",
      "size": "0x400",
      "clock_enable": {"peripheral": "RCC", "register": "AHB1ENR", "bit": 0},
      "registers": [
        {"name": "MODER", "offset": "0x00", "reset_value": "0xA8000000", "behavior": "plain"},
        {"name": "OTYPER", "offset": "0x04", "reset_value": "0x00000000", "behavior": "plain"},
        {"name": "OSPEEDR", "offset": "0x08", "reset_value": "0x0C000000", "behavior": "plain"},
        {"name": "PUPDR", "offset": "0x0C", "reset_value": "0x64000000", "behavior": "plain"},
        {"name": "IDR", "offset": "0x10", "reset_value": "0x00000000", "behavior": "gpio_idr"},
        {"name": "ODR", "offset": "0x14", "reset_value": "0x00000000", "behavior": "plain"}
      ]
    },
    {
      "name": "GPIOD",
      "base_address": "0x40020C00",
      "size": "0x400",
      "clock_enable": {"peripheral": "RCC", "register": "AHB1ENR", "bit": 3},
      "registers": [
        {"name": "MODER", "offset": "0x00", "reset_value": "0x00000000", "behavior": "plain"},
        {"name": "OTYPER", "offset": "0x04", "reset_value": "0x00000000", "behavior": "plain"},
        {"name": "OSPEEDR", "offset": "0x08", "reset_value": "0x00000000", "behavior": "plain"},
        {"name": "PUPDR", "offset": "0x0C", "reset_value": "0x00000000", "behavior": "plain"},
        {"name": "IDR", "offset": "0x10", "reset_value": "0x00000000", "behavior": "gpio_idr"},
        {"name": "ODR", "offset": "0x14", "reset_value": "0x00000000", "behavior": "plain"}
      ]
    },
    {
      "name": "USART2",
      "base_address": "0x40004400",
      "size": "0x400",
      "registers": [
        {"name": "SR", "offset": "0x00", "reset_value": "0x000000C0", "behavior": "usart_sr"},
        {"name": "DR", "offset": "0x04", "reset_value": "0x00000000", "behavior": "usart_dr"},
        {"name": "BRR", "offset": "0x08", "reset_value": "0x00000000", "behavior": "plain"},
        {"name": "CR1", "offset": "0x0C", "reset_value": "0x00000000", "behavior": "plain"}
      ]
    }
  ]
}
)";

}  // namespace

BoardMap parse_board_map(std::string_view json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("board", e.what());
    }
    BoardMap map;
    map.name = str(required(doc, "name", "board"), "board.name");
    const auto& periphs = required(doc, "peripherals", "board");
    if (!periphs.is_array()) throw ConfigError("board.peripherals", "expected an array");
    for (std::size_t i = 0; i < periphs.size(); ++i) {
        const auto& pj = periphs[i];
        const std::string field = "peripherals[" + std::to_string(i) + "]";
        PeripheralDef p;
        p.name = str(required(pj, "name", field), field + ".name");
        p.base_address = u32(required(pj, "base_address", field), field + ".base_address");
        if (pj.contains("clock_enable")) {
            const auto& cj = pj.at("clock_enable");
            const std::string cf = field + ".clock_enable";
            ClockEnable ce;
            ce.peripheral = str(required(cj, "peripheral", cf), cf + ".peripheral");
            ce.register_name = str(required(cj, "register", cf), cf + ".register");
            ce.bit = static_cast<unsigned>(u32(required(cj, "bit", cf), cf + ".bit"));
            p.clock_enable = ce;
        }
        const auto& regs = required(pj, "registers", field);
        if (!regs.is_array()) throw ConfigError(field + ".registers", "expected an array");
        std::uint64_t max_end = 0;
        for (std::size_t k = 0; k < regs.size(); ++k) {
            const auto& rj = regs[k];
            const std::string rf = field + ".registers[" + std::to_string(k) + "]";
            RegisterDef r;
            r.name = str(required(rj, "name", rf), rf + ".name");
            r.offset = u32(required(rj, "offset", rf), rf + ".offset");
            r.reset_value = rj.contains("reset_value") ? u32(rj.at("reset_value"), rf + ".reset_value") : 0;
            r.behavior = rj.contains("behavior") ? behavior(str(rj.at("behavior"), rf + ".behavior"), rf + ".behavior")
                                                 : RegisterBehavior::Plain;
            max_end = std::max<std::uint64_t>(max_end, std::uint64_t{r.offset} + 4);
            p.registers.push_back(std::move(r));
        }
        if (pj.contains("size")) {
            p.size = u32(pj.at("size"), field + ".size");
        } else {
            if (max_end > 0xFFFFFFFFULL) throw ConfigError(field + ".registers", "offsets too large");
            p.size = static_cast<std::uint32_t>(max_end);
        }
        map.peripherals.push_back(std::move(p));
    }
    map.validate();
    return map;
}

BoardMap load_board_map(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot read board map " + path.string());
    const std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    return parse_board_map(text);
}

std::string_view default_board_map_json() { return kDefaultMap; }

const BoardMap& default_board_map() {
    static const BoardMap map = parse_board_map(kDefaultMap);
    return map;
}

}  // namespace halgen
