/*
 * Copyright (c) 2026 halgen contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <string>

#include "halgen/generation/backend.hpp"

namespace halgen {

struct HttpBackendConfig {
    /// Full URL of the chat-completions endpoint, http:// or https://.
    std::string endpoint = "https://api.openai.com/v1/chat/completions";
    std::string model = "gpt-4o-mini";
    /// Environment variable holding the bearer token.
    std::string auth_env = "OPENAI_API_KEY";
    double timeout_seconds = 60.0;
    int max_retries = 2;
};

/// JSON body for one request; exposed for wire-format tests.
std::string chat_request_body(const ChatRequest& request);

/// First choice's message content. Throws BackendError(malformed_response).
std::string parse_chat_response(const std::string& body);

class HttpBackend : public Backend {
public:
    /// Throws ConfigError on an unusable endpoint URL.
    explicit HttpBackend(HttpBackendConfig config);

    std::string id() const override { return "http"; }
    /// One POST. The token is read from the environment on every call.
    BackendReply send(const ChatRequest& request) override;

    const HttpBackendConfig& config() const noexcept { return config_; }

private:
    HttpBackendConfig config_;
    std::string origin_;  // scheme://host[:port]
    std::string path_;
};

}  // namespace halgen
