/*
 * Copyright (c) 2026 halgen contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <string>

#include "halgen/c_ast/ast.hpp"

namespace halgen {

/// Canonical rendering; the output re-parses to a structurally equal unit.
/// Comments are not preserved.
std::string pretty_print(const ast::TranslationUnit& unit);

std::string print_item(const ast::TopLevelItem& item);
std::string print_stmt(const ast::Stmt& stmt, int indent = 0);
std::string print_expr(const ast::Expr& expr);

/// Type spelling for casts: `volatile uint32_t *`.
std::string print_type(const ast::CType& type);

}  // namespace halgen
