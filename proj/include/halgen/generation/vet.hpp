/*
 * Copyright (c) 2026 halgen contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "halgen/analysis/symbols.hpp"
#include "halgen/c_ast/ast.hpp"

namespace halgen {

/// Name patterns use a leading or trailing `*` as a wildcard:
/// "HAL_*" is a prefix, "*_hal*" a substring, anything else an exact name.
/// Matching is case-insensitive.
struct VetPolicy {
    std::vector<std::string> forbidden_name_patterns = {"HAL_*", "stm32*", "*_hal*"};
    std::set<std::string, std::less<>> allowed_external_names;
    /// Reject references that are neither allowed nor defined by the patch.
    bool strict = false;
};

bool matches_pattern(std::string_view name, std::string_view pattern);

/// Allowed names: every definition in the table plus the pending missing names.
VetPolicy make_vet_policy(const SymbolTable& table, const std::vector<MissingElement>& missing, bool strict = false,
                          std::vector<std::string> forbidden = {"HAL_*", "stm32*", "*_hal*"});

enum class RejectReason { ParseFailed, WrongName, WrongArity, ForbiddenReference, UnknownReference, MultipleDefinitions };

std::string_view to_string(RejectReason reason);

struct VettedPatch {
    std::string name;
    ElementKind kind;
    /// Code as generated, include lines removed.
    std::string code;
    ast::TopLevelItem item;
    /// External names the patch uses that are not yet defined anywhere.
    std::vector<std::string> new_references;
};

struct Rejection {
    std::vector<RejectReason> reasons;  // sorted, unique
    std::string detail;
};

using VetResult = std::variant<VettedPatch, Rejection>;

VetResult vet_patch(std::string_view code, const MissingElement& elem, const SymbolTable& table,
                    const VetPolicy& policy);

/// Retry feedback appended to the user message after a rejection.
std::string rejection_feedback(const Rejection& rejection);

}  // namespace halgen
