/*
 * Copyright (c) 2026 halgen contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "halgen/analysis/project.hpp"

namespace halgen {

enum class DefinitionKind { Function, Constant, Global };

/// Kind of a gap: functions are found at call sites, constants at plain uses.
enum class ElementKind { Function, Constant };

std::string_view to_string(DefinitionKind kind);
std::string_view to_string(ElementKind kind);

struct Signature {
    ast::CType return_type;
    std::vector<ast::CType> param_types;

    bool operator==(const Signature&) const = default;
};

struct Definition {
    DefinitionKind kind;
    std::optional<Signature> signature;  // functions only
    SourceSpan span;
    std::size_t unit_index = 0;
};

enum class SiteKind { Call, Use };

struct Reference {
    SiteKind site;
    SourceSpan span;
    std::size_t unit_index = 0;
    std::vector<ast::ExprPtr> call_args;  // Call only
    /// The referenced value feeds an enclosing expression, initializer,
    /// condition or return.
    bool value_consumed = false;
};

struct SymbolTable {
    std::map<std::string, Definition> definitions;
    /// Per name, in source order. Locals and parameters never appear here.
    std::map<std::string, std::vector<Reference>> references;
};

struct MissingElement {
    std::string name;
    ElementKind kind;
    std::size_t arity = 0;                 // Function only
    std::vector<std::string> sample_args;  // pretty-printed, from the first call
    bool value_consumed = false;
    SourceSpan first_ref_span;
};

/// Throws DuplicateDefinition when a name is defined twice across the project.
SymbolTable build_symbol_table(const Project& project);

/// Table for one free-standing unit (used when vetting patches).
SymbolTable build_symbol_table(const ast::TranslationUnit& unit);

/// Referenced-but-undefined names ordered by first reference (unit order, then
/// line, then column). Throws ConflictingArity.
std::vector<MissingElement> detect_missing(const SymbolTable& table);

/// Parameters default to register width (u32); a decimal literal argument
/// of at most 255 infers u8. Returns u32 when the result is consumed.
Signature infer_signature(const MissingElement& element);

}  // namespace halgen
