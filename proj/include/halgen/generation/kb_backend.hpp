/*
 * Copyright (c) 2026 halgen contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "halgen/analysis/symbols.hpp"
#include "halgen/generation/backend.hpp"

namespace halgen {

struct KbEntry {
    ElementKind kind;
    std::string text;
};

struct KnowledgeBase {
    std::map<std::string, KbEntry, std::less<>> entries;
    /// `{name}` and, for functions, `{params}` are substituted.
    std::string constant_fallback = "#define {name} 0x00";
    std::string function_fallback = "uint32_t {name}({params})\n{\n    return 0;\n}";

    /// Throws ConfigError unless every entry parses and defines exactly its
    /// key with the recorded kind.
    void validate() const;
};

/// Reads `manifest.json` from `dir`:
/// {"entries": [{"name": "...", "kind": "function"|"constant", "file": "name.c"}],
///  "fallback": {"constant": "...", "function": "..."}}
/// `file` defaults to `<name>.c`; `fallback` is optional.
KnowledgeBase load_knowledge_base(const std::filesystem::path& dir);

/// Instantiated fallback stub for a missing name.
std::string kb_fallback(const KnowledgeBase& kb, std::string_view name, ElementKind kind, std::size_t arity);

/// Deterministic offline backend. Reads the element name, kind and arity back
/// out of the instructions section of the user message.
class KbBackend : public Backend {
public:
    explicit KbBackend(KnowledgeBase kb) : kb_(std::move(kb)) {}

    std::string id() const override { return "kb"; }
    BackendReply send(const ChatRequest& request) override;

    const KnowledgeBase& knowledge_base() const noexcept { return kb_; }

private:
    KnowledgeBase kb_;
};

}  // namespace halgen
