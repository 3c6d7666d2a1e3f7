/*
 * Copyright (c) 2026 halgen contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "halgen/c_ast/source_span.hpp"

namespace halgen {

enum class TokenKind { Ident, IntLit, Punct, Keyword, Directive };

struct Token {
    TokenKind kind;
    std::string text;
    SourceSpan span;
    std::uint64_t value = 0;  // IntLit only
};

struct LexOptions {
    /// Skip characters that cannot start a token and accept malformed
    /// literals instead of throwing. Used for free-form query text.
    bool lenient = false;
};

/// Tokenizes C-subset source. Comments are skipped. `#include` lines become a
/// single Directive token; `#define` yields a Directive token followed by the
/// ordinary tokens of its line.
std::vector<Token> lex(std::string_view source, std::string_view file_id, LexOptions options = {});

/// Identifiers become "ID", integer literals "LIT", everything else keeps its text.
std::vector<std::string> normalize_tokens(std::string_view source);

bool is_keyword(std::string_view word) noexcept;

}  // namespace halgen
