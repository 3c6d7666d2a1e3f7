/*
 * Copyright (c) 2026 halgen contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */
#include "halgen/generation/http_backend.hpp"

#include <cmath>
#include <cstdlib>
#include <regex>

#include <httplib.h>
#include <json.hpp>

#include "halgen/error.hpp"

namespace halgen {

std::string chat_request_body(const ChatRequest& request) {
    nlohmann::json messages = nlohmann::json::array();
    for (const auto& m : request.messages) {
        messages.push_back({{"role", std::string(to_string(m.role))}, {"content", m.content}});
    }
    nlohmann::json body = {{"model", request.model}, {"messages", std::move(messages)}};
    // Keep an integral 0 on the wire when the temperature is whole.
    if (request.temperature == std::floor(request.temperature)) {
        body["temperature"] = static_cast<long long>(request.temperature);
    } else {
        body["temperature"] = request.temperature;
    }
    return body.dump();
}

std::string parse_chat_response(const std::string& body) {
    try {
        const auto json = nlohmann::json::parse(body);
        const auto& content = json.at("choices").at(0).at("message").at("content");
        if (!content.is_string()) throw BackendError(BackendErrorCategory::MalformedResponse, "content is not a string");
        return content.get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw BackendError(BackendErrorCategory::MalformedResponse, e.what());
    }
}

HttpBackend::HttpBackend(HttpBackendConfig config) : config_(std::move(config)) {
    static const std::regex url(R"(^(https?://[^/]+)(/.*)?$)");
    std::smatch m;
    if (!std::regex_match(config_.endpoint, m, url)) {
        throw ConfigError("http.endpoint", "expected an http:// or https:// URL, got '" + config_.endpoint + "'");
    }
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
    if (config_.endpoint.starts_with("https://")) {
        throw ConfigError("http.endpoint", "https endpoints need a build with TLS support");
    }
#endif
    origin_ = m[1].str();
    path_ = m[2].matched ? m[2].str() : "/";
    if (config_.timeout_seconds <= 0) throw ConfigError("http.timeout_seconds", "must be positive");
}

BackendReply HttpBackend::send(const ChatRequest& request) {
    const char* token = std::getenv(config_.auth_env.c_str());
    if (!token || !*token) {
        throw BackendError(BackendErrorCategory::Auth, "environment variable " + config_.auth_env + " is not set");
    }
    httplib::Client client(origin_);
    const auto timeout = std::chrono::duration<double>(config_.timeout_seconds);
    const auto usec = std::chrono::duration_cast<std::chrono::microseconds>(timeout);
    client.set_connection_timeout(usec);
    client.set_read_timeout(usec);
    client.set_write_timeout(usec);
    const httplib::Headers headers = {{"Authorization", std::string("Bearer ") + token}};

    auto res = client.Post(path_, headers, chat_request_body(request), "application/json");
    if (!res) {
        throw BackendError(BackendErrorCategory::Network, "request failed: " + httplib::to_string(res.error()));
    }
    const int status = res->status;
    if (status == 401 || status == 403) throw BackendError(BackendErrorCategory::Auth, "HTTP " + std::to_string(status));
    if (status == 429) throw BackendError(BackendErrorCategory::RateLimit, "HTTP 429");
    if (status < 200 || status >= 300) throw BackendError(BackendErrorCategory::Network, "HTTP " + std::to_string(status));
    return {parse_chat_response(res->body), false};
}

}  // namespace halgen
