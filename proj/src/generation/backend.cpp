/*
 * Copyright (c) 2026 halgen contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */
#include "halgen/generation/backend.hpp"

namespace halgen {

std::string_view to_string(ChatRole role) { return role == ChatRole::System ? "system" : "user"; }

std::string_view to_string(BackendErrorCategory category) {
    switch (category) {
        case BackendErrorCategory::Network: return "network";
        case BackendErrorCategory::Auth: return "auth";
        case BackendErrorCategory::RateLimit: return "rate_limit";
        case BackendErrorCategory::MalformedResponse: return "malformed_response";
    }
    return "?";
}

ChatRequest make_chat_request(const RenderedPrompt& prompt, std::string model, std::string_view feedback) {
    ChatRequest req;
    req.model = std::move(model);
    req.temperature = 0.0;
    std::string user;
    for (std::size_t i = 1; i < prompt.sections.size(); ++i) {
        if (i > 1) user += "\n\n";
        user += prompt.sections[i].second;
    }
    if (!feedback.empty()) {
        user += "\n\n";
        user += feedback;
    }
    req.messages.push_back({ChatRole::System, prompt.sections.at(0).second});
    req.messages.push_back({ChatRole::User, std::move(user)});
    return req;
}

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

}  // namespace

std::string extract_code(std::string_view raw_text) {
    std::string_view code = raw_text;
    if (const auto open = raw_text.find("```"); open != std::string_view::npos) {
        // Skip the language tag up to the end of the fence line.
        auto body = raw_text.find('\n', open + 3);
        body = body == std::string_view::npos ? raw_text.size() : body + 1;
        const auto close = raw_text.find("```", body);
        code = raw_text.substr(body, close == std::string_view::npos ? std::string_view::npos : close - body);
    }
    code = trim(code);
    if (code.empty()) throw EmptyGeneration();
    return std::string(code);
}

GenerationResult Generator::generate(const RenderedPrompt& prompt, std::string_view feedback) {
    const std::size_t index = ++calls_;
    BackendReply reply = backend_->send(make_chat_request(prompt, model_, feedback));
    GenerationResult result;
    result.backend_id = backend_->id();
    result.call_index = index;
    result.provisional = reply.provisional;
    result.raw_text = std::move(reply.text);
    result.extracted_code = extract_code(result.raw_text);
    return result;
}

}  // namespace halgen
