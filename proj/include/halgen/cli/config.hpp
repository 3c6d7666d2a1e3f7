/*
 * Copyright (c) 2026 halgen contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "halgen/completion/completion.hpp"
#include "halgen/generation/http_backend.hpp"

namespace halgen {

struct Config {
    std::string backend = "kb";  // "kb" or "http"
    HttpBackendConfig http;
    std::size_t retrieval_k = 3;
    bool strict_vetting = false;
    bool strict_gating = true;
    /// Built-in stm32f407 map when unset.
    std::optional<std::filesystem::path> board_map_path;
    /// Built-in prompt template when unset.
    std::optional<std::filesystem::path> template_path;
    std::filesystem::path kb_path;
    std::uint64_t seed = 42;
    std::string hal_unit = "hal.c";
    /// Pristine project used by experiments.
    std::filesystem::path fixture_dir;
    /// Defaults to `<fixture_dir>/scenario.json`.
    std::optional<std::filesystem::path> scenario_path;
    CompletionLimits limits;
    std::vector<std::chrono::milliseconds> retry_backoff = {std::chrono::seconds(1), std::chrono::seconds(4)};

    /// Throws ConfigError on bad values or missing paths.
    void validate() const;
    std::filesystem::path effective_scenario_path() const;
};

/// Directory holding the bundled demo, kb, boards and templates; the
/// HALGEN_DATA_DIR environment variable overrides the build-time location.
std::filesystem::path default_data_dir();

/// Defaults pointing into default_data_dir().
Config default_config();

/// JSON object; every key optional, unknown keys rejected. Relative paths
/// resolve against `base_dir`. Keys: backend, http {endpoint, model, auth_env,
/// timeout_s, max_retries}, retrieval_k, strict_vetting, strict_gating,
/// board_map_path, template_path, kb_path, seed, hal_unit, fixture_dir,
/// scenario_path, limits {max_iterations, max_calls,
/// max_rejections_per_element}, retry_backoff_ms.
Config parse_config(std::string_view json_text, const std::filesystem::path& base_dir);
Config load_config(const std::filesystem::path& path);

}  // namespace halgen
