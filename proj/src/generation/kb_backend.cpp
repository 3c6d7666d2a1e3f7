/*
 * Copyright (c) 2026 halgen contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */
#include "halgen/generation/kb_backend.hpp"

#include <fstream>
#include <iterator>
#include <regex>

#include <json.hpp>

#include "halgen/c_ast/parser.hpp"
#include "halgen/error.hpp"

namespace halgen {
namespace {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot read " + path.string());
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

std::string replace_all(std::string s, std::string_view from, std::string_view to) {
    for (auto pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size())) {
        s.replace(pos, from.size(), to);
    }
    return s;
}

ElementKind parse_kind(const std::string& s, const std::string& field) {
    if (s == "function") return ElementKind::Function;
    if (s == "constant") return ElementKind::Constant;
    throw ConfigError(field, "kind must be \"function\" or \"constant\"");
}

}  // namespace

void KnowledgeBase::validate() const {
    for (const auto& [name, entry] : entries) {
        const std::string field = "entries." + name;
        ast::TranslationUnit unit;
        try {
            unit = parse(entry.text, name + ".c");
        } catch (const SourceError& e) {
            throw ConfigError(field, e.what());
        }
        std::size_t defs = 0;
        for (const auto& item : unit.items) {
            if (item.as<ast::IncludeDirective>()) continue;
            ++defs;
            const bool is_fn = item.as<ast::FunctionDef>() != nullptr;
            if (item.name() != name || is_fn != (entry.kind == ElementKind::Function)) {
                throw ConfigError(field, "entry must define exactly the " + std::string(to_string(entry.kind)) + " '" +
                                             name + "'");
            }
        }
        if (defs != 1) throw ConfigError(field, "entry must contain exactly one definition");
    }
}

KnowledgeBase load_knowledge_base(const std::filesystem::path& dir) {
    const auto manifest_path = dir / "manifest.json";
    nlohmann::json manifest;
    try {
        manifest = nlohmann::json::parse(read_file(manifest_path));
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("manifest", e.what());
    }
    KnowledgeBase kb;
    try {
        const auto& entries = manifest.at("entries");
        for (std::size_t i = 0; i < entries.size(); ++i) {
            const auto& e = entries[i];
            const std::string field = "entries[" + std::to_string(i) + "]";
            const std::string name = e.at("name").get<std::string>();
            const ElementKind kind = parse_kind(e.at("kind").get<std::string>(), field + ".kind");
            const std::string file = e.value("file", name + ".c");
            if (kb.entries.count(name)) throw ConfigError(field + ".name", "duplicate entry '" + name + "'");
            kb.entries[name] = KbEntry{kind, read_file(dir / file)};
        }
        if (manifest.contains("fallback")) {
            const auto& fb = manifest.at("fallback");
            kb.constant_fallback = fb.value("constant", kb.constant_fallback);
            kb.function_fallback = fb.value("function", kb.function_fallback);
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("manifest", e.what());
    }
    kb.validate();
    return kb;
}

std::string kb_fallback(const KnowledgeBase& kb, std::string_view name, ElementKind kind, std::size_t arity) {
    if (kind == ElementKind::Constant) return replace_all(kb.constant_fallback, "{name}", name);
    std::string params;
    for (std::size_t i = 0; i < arity; ++i) {
        if (i) params += ", ";
        params += "uint32_t arg" + std::to_string(i);
    }
    if (params.empty()) params = "void";
    return replace_all(replace_all(kb.function_fallback, "{name}", name), "{params}", params);
}

BackendReply KbBackend::send(const ChatRequest& request) {
    static const std::regex name_re(R"('([A-Za-z_][A-Za-z0-9_]*)')");
    static const std::regex arity_re(R"(with ([0-9]+) parameters)");
    const ChatMessage* user = nullptr;
    for (const auto& m : request.messages) {
        if (m.role == ChatRole::User) user = &m;
    }
    if (!user) throw BackendError(BackendErrorCategory::MalformedResponse, "request has no user message");
    const std::string instructions = user->content.substr(0, user->content.find("\n\n"));

    std::smatch m;
    if (!std::regex_search(instructions, m, name_re)) {
        throw BackendError(BackendErrorCategory::MalformedResponse, "no element name in the instructions");
    }
    const std::string name = m[1].str();

    std::string text;
    bool provisional = false;
    if (auto it = kb_.entries.find(name); it != kb_.entries.end()) {
        text = it->second.text;
    } else {
        std::smatch a;
        const bool is_function = std::regex_search(instructions, a, arity_re);
        text = kb_fallback(kb_, name, is_function ? ElementKind::Function : ElementKind::Constant,
                           is_function ? std::stoul(a[1].str()) : 0);
        provisional = true;
    }
    while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) text.pop_back();
    return {"```c\n" + text + "\n```\n", provisional};
}

}  // namespace halgen
