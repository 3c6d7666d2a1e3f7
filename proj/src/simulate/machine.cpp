/*
 * Copyright (c) 2026 halgen contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */
#include "halgen/simulate/machine.hpp"

#include <cstdio>
#include <fstream>
#include <iterator>
#include <set>

#include <json.hpp>

#include "halgen/error.hpp"

namespace halgen {

std::string_view to_string(Severity severity) { return severity == Severity::Error ? "error" : "warning"; }

void Scenario::validate() const {
    for (const auto& [key, values] : gpio_inputs) {
        const std::string field = "gpio_inputs." + key.first + "." + std::to_string(key.second);
        if (key.second > 15) throw ConfigError(field, "pin index must be in [0, 15]");
        if (values.empty()) throw ConfigError(field, "needs at least one value");
        for (auto v : values) {
            if (v > 1) throw ConfigError(field, "values must be 0 or 1");
        }
    }
    if (fuel_limit == 0) throw ConfigError("fuel_limit", "must be positive");
}

namespace {

std::uint32_t u32(const nlohmann::json& v, const std::string& field) {
    if (v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
        const auto n = v.get<std::uint64_t>();
        if (n <= 0xFFFFFFFFULL) return static_cast<std::uint32_t>(n);
    } else if (v.is_string()) {
        const auto s = v.get<std::string>();
        try {
            std::size_t used = 0;
            const bool hex = s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X');
            const auto n = std::stoull(s, &used, hex ? 16 : 10);
            if (used == s.size() && s[0] != '-' && s[0] != '+' && n <= 0xFFFFFFFFULL) return static_cast<std::uint32_t>(n);
        } catch (const std::logic_error&) {
        }
    }
    throw ConfigError(field, "expected a 32-bit unsigned number");
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> address_values(const nlohmann::json& arr, const std::string& field) {
    if (!arr.is_array()) throw ConfigError(field, "expected an array");
    std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const std::string f = field + "[" + std::to_string(i) + "]";
        if (!arr[i].is_object() || !arr[i].contains("address") || !arr[i].contains("value")) {
            throw ConfigError(f, "expected {\"address\": ..., \"value\": ...}");
        }
        out.emplace_back(u32(arr[i].at("address"), f + ".address"), u32(arr[i].at("value"), f + ".value"));
    }
    return out;
}

std::string hex(std::uint32_t v) {
    char buf[11];
    std::snprintf(buf, sizeof buf, "0x%08X", v);
    return buf;
}

}  // namespace

Scenario parse_scenario(std::string_view json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("scenario", e.what());
    }
    if (!doc.is_object()) throw ConfigError("scenario", "expected an object");
    static const std::set<std::string> keys = {"gpio_inputs", "expected_log", "expected_registers", "register_presets",
                                               "fuel_limit"};
    for (const auto& [key, value] : doc.items()) {
        if (!keys.count(key)) throw ConfigError(key, "unknown scenario key");
    }
    Scenario s;
    if (doc.contains("gpio_inputs")) {
        const auto& gi = doc.at("gpio_inputs");
        if (!gi.is_object()) throw ConfigError("gpio_inputs", "expected an object");
        for (const auto& [periph, pins] : gi.items()) {
            if (!pins.is_object()) throw ConfigError("gpio_inputs." + periph, "expected an object of pins");
            for (const auto& [pin, values] : pins.items()) {
                const std::string field = "gpio_inputs." + periph + "." + pin;
                unsigned index = 0;
                try {
                    std::size_t used = 0;
                    index = static_cast<unsigned>(std::stoul(pin, &used));
                    if (used != pin.size()) throw std::invalid_argument(pin);
                } catch (const std::logic_error&) {
                    throw ConfigError(field, "pin must be a decimal index");
                }
                if (!values.is_array()) throw ConfigError(field, "expected an array of bits");
                std::vector<std::uint8_t> bits;
                for (const auto& v : values) {
                    if (!v.is_number_integer()) throw ConfigError(field, "values must be 0 or 1");
                    const auto b = v.get<std::int64_t>();
                    if (b != 0 && b != 1) throw ConfigError(field, "values must be 0 or 1");
                    bits.push_back(static_cast<std::uint8_t>(b));
                }
                s.gpio_inputs[{periph, index}] = std::move(bits);
            }
        }
    }
    if (doc.contains("expected_log")) {
        if (!doc.at("expected_log").is_string()) throw ConfigError("expected_log", "expected a string");
        s.expected_log = doc.at("expected_log").get<std::string>();
    }
    if (doc.contains("expected_registers")) s.expected_registers = address_values(doc.at("expected_registers"), "expected_registers");
    if (doc.contains("register_presets")) s.register_presets = address_values(doc.at("register_presets"), "register_presets");
    if (doc.contains("fuel_limit")) {
        const auto& f = doc.at("fuel_limit");
        if (!f.is_number_integer() || f.get<std::int64_t>() <= 0) throw ConfigError("fuel_limit", "must be a positive integer");
        s.fuel_limit = f.get<std::uint64_t>();
    }
    s.validate();
    return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot read scenario " + path.string());
    const std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    return parse_scenario(text);
}

Verdict check_scenario(const MachineState& state, const Scenario& scenario) {
    Verdict v;
    v.usart_log = state.usart_log;
    v.expected_log = scenario.expected_log;
    v.log_match = state.usart_log == scenario.expected_log;
    v.diagnostics = state.diagnostics;
    v.steps_used = state.steps_used;
    bool regs_ok = true;
    for (const auto& [address, expected] : scenario.expected_registers) {
        const auto it = state.mmio.find(address);
        const bool present = it != state.mmio.end();
        const std::uint32_t actual = present ? it->second : 0;
        const bool ok = present && actual == expected;
        regs_ok = regs_ok && ok;
        v.register_matches.push_back({address, expected, actual, ok});
    }
    bool errors = false;
    for (const auto& d : state.diagnostics) errors = errors || d.severity == Severity::Error;
    v.passed = v.log_match && regs_ok && !errors;
    return v;
}

std::string verdict_to_json(const Verdict& verdict, int indent) {
    nlohmann::ordered_json j;
    j["passed"] = verdict.passed;
    j["log_match"] = verdict.log_match;
    j["usart_log"] = verdict.usart_log;
    j["expected_log"] = verdict.expected_log;
    j["register_matches"] = nlohmann::ordered_json::array();
    for (const auto& m : verdict.register_matches) {
        j["register_matches"].push_back(
            {{"address", hex(m.address)}, {"expected", hex(m.expected)}, {"actual", hex(m.actual)}, {"ok", m.ok}});
    }
    j["diagnostics"] = nlohmann::ordered_json::array();
    for (const auto& d : verdict.diagnostics) {
        j["diagnostics"].push_back({{"severity", to_string(d.severity)}, {"message", d.message}, {"location", d.location}});
    }
    j["steps_used"] = verdict.steps_used;
    if (verdict.compile_status) {
        j["compile_status"] = {{"command", verdict.compile_status->command},
                               {"exit_code", verdict.compile_status->exit_code},
                               {"output", verdict.compile_status->output}};
    }
    return j.dump(indent, ' ', false, nlohmann::ordered_json::error_handler_t::replace);
}

}  // namespace halgen
