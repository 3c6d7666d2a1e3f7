/*
 * Copyright (c) 2026 halgen contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <string_view>

#include "halgen/c_ast/ast.hpp"

namespace halgen {

/// Parses a complete C-subset translation unit. Throws LexError or ParseError;
/// constructs outside the subset (structs, typedefs, arrays, function-like
/// macros, prototypes, ...) are reported as ParseError.
ast::TranslationUnit parse(std::string_view source, std::string_view file_id);

/// Parses a single expression; used for sample arguments and tests.
ast::ExprPtr parse_expression(std::string_view source, std::string_view file_id = "<expr>");

}  // namespace halgen
