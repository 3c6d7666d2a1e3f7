/*
 * Copyright (c) 2026 halgen contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "halgen/analysis/symbols.hpp"
#include "halgen/retrieval/snippets.hpp"

namespace halgen {

/// Placeholders: {function_name} {length_parameters} {sample_parameters} {context}.
struct PromptTemplate {
    std::string cue;
    std::string instructions;
    /// Instruction text used when the missing element is a constant.
    std::string constant_instructions;
    std::string constraints;
    std::string return_format;
    std::string context_frame;
};

inline constexpr std::array<std::string_view, 5> kSectionNames = {"Cue", "Instructions", "Constraints", "ReturnFormat",
                                                                  "Context"};

inline constexpr std::string_view kNoContext = "No existing context available.";
inline constexpr std::string_view kContextSeparator = "\n---\n";

struct RenderedPrompt {
    /// Always five entries, in kSectionNames order.
    std::vector<std::pair<std::string, std::string>> sections;
    /// Sections joined by blank lines.
    std::string flattened;

    const std::string& section(std::string_view name) const;
};

PromptTemplate default_template();

/// Loads a template file: `[cue]`, `[instructions]`, `[constraints]`,
/// `[return_format]`, `[context_frame]` and optionally `[constant_instructions]`
/// headers, each followed by its multi-line text. Missing optional sections
/// fall back to the default. Throws TemplateError on unknown sections or
/// placeholders; IoError if unreadable.
PromptTemplate load_template(const std::filesystem::path& path);
PromptTemplate parse_template(std::string_view text);

/// Throws TemplateError if a placeholder survives substitution.
RenderedPrompt build_prompt(const MissingElement& element, const Signature& signature,
                            const std::vector<Snippet>& retrieved, const PromptTemplate& tmpl);

}  // namespace halgen
