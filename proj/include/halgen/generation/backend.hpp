/*
 * Copyright (c) 2026 halgen contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "halgen/error.hpp"
#include "halgen/prompting/prompt.hpp"

namespace halgen {

enum class ChatRole { System, User };

std::string_view to_string(ChatRole role);

struct ChatMessage {
    ChatRole role;
    std::string content;
};

struct ChatRequest {
    std::string model;
    double temperature = 0.0;
    std::vector<ChatMessage> messages;
};

/// Cue becomes the system message; the other four sections, plus optional
/// retry feedback, form the user message. Temperature is always 0.
ChatRequest make_chat_request(const RenderedPrompt& prompt, std::string model, std::string_view feedback = {});

enum class BackendErrorCategory { Network, Auth, RateLimit, MalformedResponse };

std::string_view to_string(BackendErrorCategory category);

class BackendError : public Error {
public:
    BackendError(BackendErrorCategory category, const std::string& message)
        : Error(std::string(to_string(category)) + ": " + message), category_(category) {}

    BackendErrorCategory category() const noexcept { return category_; }

private:
    BackendErrorCategory category_;
};

struct BackendReply {
    std::string text;
    /// The reply is a placeholder rather than a real implementation.
    bool provisional = false;
};

class Backend {
public:
    virtual ~Backend() = default;
    virtual std::string id() const = 0;
    /// One round trip. Throws BackendError.
    virtual BackendReply send(const ChatRequest& request) = 0;
};

struct GenerationResult {
    std::string raw_text;
    std::string extracted_code;
    std::string backend_id;
    std::size_t call_index = 0;  // 1-based within a completion run
    bool provisional = false;
};

/// Contents of the first ``` fenced block (language tag dropped), else the
/// trimmed text. Throws EmptyGeneration for whitespace-only results.
std::string extract_code(std::string_view raw_text);

/// Counts calls for one completion run.
class Generator {
public:
    Generator(std::shared_ptr<Backend> backend, std::string model)
        : backend_(std::move(backend)), model_(std::move(model)) {}

    /// Invokes the backend exactly once. Throws BackendError or EmptyGeneration;
    /// the call is counted either way.
    GenerationResult generate(const RenderedPrompt& prompt, std::string_view feedback = {});

    std::size_t calls() const noexcept { return calls_; }
    const std::string& model() const noexcept { return model_; }
    Backend& backend() noexcept { return *backend_; }

private:
    std::shared_ptr<Backend> backend_;
    std::string model_;
    std::size_t calls_ = 0;
};

}  // namespace halgen
