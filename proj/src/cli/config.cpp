/*
 * Copyright (c) 2026 halgen contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */
#include "halgen/cli/config.hpp"

#include <cstdlib>
#include <fstream>
#include <iterator>
#include <set>

#include <json.hpp>

#include "halgen/error.hpp"

#ifndef HALGEN_DEFAULT_DATA_DIR
#define HALGEN_DEFAULT_DATA_DIR "data"
#endif

namespace fs = std::filesystem;

namespace halgen {

fs::path default_data_dir() {
    if (const char* env = std::getenv("HALGEN_DATA_DIR"); env && *env) return env;
    return HALGEN_DEFAULT_DATA_DIR;
}

Config default_config() {
    Config c;
    const fs::path data = default_data_dir();
    c.kb_path = data / "kb";
    c.fixture_dir = data / "demo";
    return c;
}

fs::path Config::effective_scenario_path() const {
    return scenario_path ? *scenario_path : fixture_dir / "scenario.json";
}

void Config::validate() const {
    if (backend != "kb" && backend != "http") throw ConfigError("backend", "must be \"kb\" or \"http\"");
    if (retrieval_k < 1) throw ConfigError("retrieval_k", "must be at least 1");
    if (http.max_retries < 0) throw ConfigError("http.max_retries", "must not be negative");
    if (http.timeout_seconds <= 0) throw ConfigError("http.timeout_s", "must be positive");
    if (http.auth_env.empty()) throw ConfigError("http.auth_env", "must name an environment variable");
    if (hal_unit.empty()) throw ConfigError("hal_unit", "must not be empty");
    limits.validate();
    auto exists = [](const fs::path& p, const char* field) {
        if (!fs::exists(p)) throw ConfigError(field, "path does not exist: " + p.string());
    };
    if (board_map_path) exists(*board_map_path, "board_map_path");
    if (template_path) exists(*template_path, "template_path");
    if (backend == "kb") exists(kb_path, "kb_path");
}

namespace {

const std::set<std::string> kKeys = {"backend",        "http",          "retrieval_k",  "strict_vetting",
                                     "strict_gating",  "board_map_path", "template_path", "kb_path",
                                     "seed",           "hal_unit",      "fixture_dir",  "scenario_path",
                                     "limits",         "retry_backoff_ms"};

template <class T>
T get(const nlohmann::json& v, const std::string& field) {
    try {
        return v.get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError(field, "has the wrong type");
    }
}

int positive_int(const nlohmann::json& v, const std::string& field) {
    if (!v.is_number_integer()) throw ConfigError(field, "expected an integer");
    const auto n = v.get<std::int64_t>();
    if (n <= 0 || n > 1'000'000'000) throw ConfigError(field, "must be a positive integer");
    return static_cast<int>(n);
}

fs::path path_value(const nlohmann::json& v, const std::string& field, const fs::path& base) {
    if (!v.is_string()) throw ConfigError(field, "expected a path string");
    const fs::path p = v.get<std::string>();
    return p.is_absolute() ? p : base / p;
}

}  // namespace

Config parse_config(std::string_view json_text, const fs::path& base_dir) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("config", e.what());
    }
    if (!doc.is_object()) throw ConfigError("config", "expected a JSON object");
    Config c = default_config();
    for (const auto& [key, value] : doc.items()) {
        if (!kKeys.count(key)) throw ConfigError(key, "unknown configuration key");
    }
    if (doc.contains("backend")) c.backend = get<std::string>(doc["backend"], "backend");
    if (doc.contains("http")) {
        const auto& h = doc["http"];
        if (!h.is_object()) throw ConfigError("http", "expected an object");
        for (const auto& [key, value] : h.items()) {
            static const std::set<std::string> http_keys = {"endpoint", "model", "auth_env", "timeout_s", "max_retries"};
            if (!http_keys.count(key)) throw ConfigError("http." + key, "unknown configuration key");
        }
        if (h.contains("endpoint")) c.http.endpoint = get<std::string>(h["endpoint"], "http.endpoint");
        if (h.contains("model")) c.http.model = get<std::string>(h["model"], "http.model");
        if (h.contains("auth_env")) c.http.auth_env = get<std::string>(h["auth_env"], "http.auth_env");
        if (h.contains("timeout_s")) {
            if (!h["timeout_s"].is_number()) throw ConfigError("http.timeout_s", "expected a number");
            c.http.timeout_seconds = h["timeout_s"].get<double>();
        }
        if (h.contains("max_retries")) {
            if (!h["max_retries"].is_number_integer()) throw ConfigError("http.max_retries", "expected an integer");
            c.http.max_retries = h["max_retries"].get<int>();
        }
    }
    if (doc.contains("retrieval_k")) c.retrieval_k = static_cast<std::size_t>(positive_int(doc["retrieval_k"], "retrieval_k"));
    if (doc.contains("strict_vetting")) c.strict_vetting = get<bool>(doc["strict_vetting"], "strict_vetting");
    if (doc.contains("strict_gating")) c.strict_gating = get<bool>(doc["strict_gating"], "strict_gating");
    if (doc.contains("board_map_path")) c.board_map_path = path_value(doc["board_map_path"], "board_map_path", base_dir);
    if (doc.contains("template_path")) c.template_path = path_value(doc["template_path"], "template_path", base_dir);
    if (doc.contains("kb_path")) c.kb_path = path_value(doc["kb_path"], "kb_path", base_dir);
    if (doc.contains("seed")) {
        if (!doc["seed"].is_number_unsigned() && !(doc["seed"].is_number_integer() && doc["seed"].get<std::int64_t>() >= 0)) {
            throw ConfigError("seed", "expected a non-negative integer");
        }
        c.seed = doc["seed"].get<std::uint64_t>();
    }
    if (doc.contains("hal_unit")) c.hal_unit = get<std::string>(doc["hal_unit"], "hal_unit");
    if (doc.contains("fixture_dir")) c.fixture_dir = path_value(doc["fixture_dir"], "fixture_dir", base_dir);
    if (doc.contains("scenario_path")) c.scenario_path = path_value(doc["scenario_path"], "scenario_path", base_dir);
    if (doc.contains("limits")) {
        const auto& l = doc["limits"];
        if (!l.is_object()) throw ConfigError("limits", "expected an object");
        for (const auto& [key, value] : l.items()) {
            if (key == "max_iterations") {
                c.limits.max_iterations = positive_int(value, "limits.max_iterations");
            } else if (key == "max_calls") {
                c.limits.max_calls = positive_int(value, "limits.max_calls");
            } else if (key == "max_rejections_per_element") {
                c.limits.max_rejections_per_element = positive_int(value, "limits.max_rejections_per_element");
            } else {
                throw ConfigError("limits." + key, "unknown configuration key");
            }
        }
    }
    if (doc.contains("retry_backoff_ms")) {
        const auto& b = doc["retry_backoff_ms"];
        if (!b.is_array()) throw ConfigError("retry_backoff_ms", "expected an array of milliseconds");
        c.retry_backoff.clear();
        for (std::size_t i = 0; i < b.size(); ++i) {
            const std::string field = "retry_backoff_ms[" + std::to_string(i) + "]";
            if (!b[i].is_number_integer() || b[i].get<std::int64_t>() < 0) throw ConfigError(field, "expected a non-negative integer");
            c.retry_backoff.emplace_back(b[i].get<std::int64_t>());
        }
    }
    c.validate();
    return c;
}

Config load_config(const fs::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot read config " + path.string());
    const std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    return parse_config(text, path.parent_path());
}

}  // namespace halgen
