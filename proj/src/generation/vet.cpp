/*
 * Copyright (c) 2026 halgen contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */
#include "halgen/generation/vet.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <sstream>

#include "halgen/c_ast/parser.hpp"
#include "halgen/error.hpp"

namespace halgen {
namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

std::string strip_include_lines(std::string_view code) {
    std::istringstream in{std::string(code)};
    std::string out;
    for (std::string line; std::getline(in, line);) {
        const auto first = line.find_first_not_of(" \t");
        if (first != std::string::npos && line.compare(first, 1, "#") == 0) {
            const auto word = line.find_first_not_of(" \t", first + 1);
            if (word != std::string::npos && line.compare(word, 7, "include") == 0) continue;
        }
        out += line;
        out += '\n';
    }
    const auto a = out.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return {};
    const auto b = out.find_last_not_of(" \t\r\n");
    return out.substr(a, b - a + 1);
}

bool kind_matches(const ast::TopLevelItem& item, ElementKind kind) {
    if (kind == ElementKind::Function) return item.as<ast::FunctionDef>() != nullptr;
    return item.as<ast::MacroConst>() != nullptr || item.as<ast::GlobalDecl>() != nullptr;
}

}  // namespace

bool matches_pattern(std::string_view name, std::string_view pattern) {
    const bool lead = pattern.starts_with('*');
    const bool trail = pattern.size() > 1 && pattern.ends_with('*');
    if (lead) pattern.remove_prefix(1);
    if (trail) pattern.remove_suffix(1);
    const std::string n = lower(name);
    const std::string p = lower(pattern);
    if (lead && trail) return n.find(p) != std::string::npos;
    if (trail) return n.starts_with(p);
    if (lead) return n.ends_with(p);
    return n == p;
}

VetPolicy make_vet_policy(const SymbolTable& table, const std::vector<MissingElement>& missing, bool strict,
                          std::vector<std::string> forbidden) {
    VetPolicy policy;
    policy.forbidden_name_patterns = std::move(forbidden);
    policy.strict = strict;
    for (const auto& [name, def] : table.definitions) policy.allowed_external_names.insert(name);
    for (const MissingElement& m : missing) policy.allowed_external_names.insert(m.name);
    return policy;
}

std::string_view to_string(RejectReason reason) {
    switch (reason) {
        case RejectReason::ParseFailed: return "ParseFailed";
        case RejectReason::WrongName: return "WrongName";
        case RejectReason::WrongArity: return "WrongArity";
        case RejectReason::ForbiddenReference: return "ForbiddenReference";
        case RejectReason::UnknownReference: return "UnknownReference";
        case RejectReason::MultipleDefinitions: return "MultipleDefinitions";
    }
    return "?";
}

VetResult vet_patch(std::string_view code, const MissingElement& elem, const SymbolTable& table,
                    const VetPolicy& policy) {
    std::set<RejectReason> reasons;
    std::vector<std::string> details;
    auto reject = [&](RejectReason r, std::string why) {
        reasons.insert(r);
        details.push_back(std::move(why));
    };
    auto rejection = [&] {
        Rejection r{{reasons.begin(), reasons.end()}, {}};
        for (const auto& d : details) r.detail += (r.detail.empty() ? "" : "; ") + d;
        return r;
    };

    const std::string stripped = strip_include_lines(code);
    ast::TranslationUnit unit;
    try {
        unit = parse(std::string(code), "<patch>");
    } catch (const SourceError& e) {
        reject(RejectReason::ParseFailed, e.what());
        return rejection();
    }

    std::vector<const ast::TopLevelItem*> defs;
    std::vector<std::string> include_paths;
    for (const auto& item : unit.items) {
        if (const auto* inc = item.as<ast::IncludeDirective>()) {
            include_paths.push_back(inc->path.substr(1, inc->path.size() - 2));
        } else {
            defs.push_back(&item);
        }
    }
    if (defs.empty()) {
        reject(RejectReason::WrongName, "no definition of '" + elem.name + "' found");
    } else if (defs.size() > 1) {
        reject(RejectReason::MultipleDefinitions, std::to_string(defs.size()) + " top-level definitions, expected one");
    } else {
        const auto& item = *defs.front();
        if (item.name() != elem.name) {
            reject(RejectReason::WrongName, "defines '" + item.name() + "' instead of '" + elem.name + "'");
        } else if (!kind_matches(item, elem.kind)) {
            reject(RejectReason::WrongName, "'" + elem.name + "' must be a " + std::string(to_string(elem.kind)));
        } else if (const auto* fn = item.as<ast::FunctionDef>(); fn && fn->params.size() != elem.arity) {
            reject(RejectReason::WrongArity, "'" + elem.name + "' takes " + std::to_string(fn->params.size()) +
                                                 " parameters, expected " + std::to_string(elem.arity));
        }
    }

    SymbolTable own;
    try {
        own = build_symbol_table(unit);
    } catch (const DuplicateDefinition& e) {
        reject(RejectReason::MultipleDefinitions, e.what());
    }

    auto forbidden = [&](std::string_view name) {
        return std::any_of(policy.forbidden_name_patterns.begin(), policy.forbidden_name_patterns.end(),
                           [&](const std::string& p) { return matches_pattern(name, p); });
    };
    auto exempt = [&](const std::string& name) {
        return name == elem.name || policy.allowed_external_names.count(name) > 0;
    };
    for (const auto& path : include_paths) {
        std::string_view file = path;
        if (auto slash = file.find_last_of('/'); slash != std::string_view::npos) file.remove_prefix(slash + 1);
        if (forbidden(file)) reject(RejectReason::ForbiddenReference, "includes forbidden header " + path);
    }
    for (const auto& [name, def] : own.definitions) {
        if (!exempt(name) && forbidden(name)) reject(RejectReason::ForbiddenReference, "defines forbidden name " + name);
    }
    std::vector<std::string> unknown;
    for (const auto& [name, refs] : own.references) {
        if (exempt(name)) continue;
        if (forbidden(name)) {
            reject(RejectReason::ForbiddenReference, "references forbidden name " + name);
        } else if (!own.definitions.count(name)) {
            unknown.push_back(name);
        }
    }
    // Calls must agree with existing definitions and pending call sites, or
    // the next round of analysis would see conflicting arities.
    for (const auto& [name, refs] : own.references) {
        std::optional<std::size_t> expected;
        if (auto d = table.definitions.find(name); d != table.definitions.end() && d->second.signature) {
            expected = d->second.signature->param_types.size();
        } else if (auto r = table.references.find(name); r != table.references.end()) {
            for (const Reference& ref : r->second) {
                if (ref.site == SiteKind::Call) {
                    expected = ref.call_args.size();
                    break;
                }
            }
        }
        if (!expected) continue;
        for (const Reference& ref : refs) {
            if (ref.site == SiteKind::Call && ref.call_args.size() != *expected) {
                reject(RejectReason::WrongArity, "calls " + name + " with " + std::to_string(ref.call_args.size()) +
                                                     " arguments, expected " + std::to_string(*expected));
                break;
            }
        }
    }
    if (policy.strict) {
        for (const auto& name : unknown) reject(RejectReason::UnknownReference, "references unknown name " + name);
    }

    if (!reasons.empty()) return rejection();
    return VettedPatch{elem.name, elem.kind, stripped, *defs.front(), std::move(unknown)};
}

std::string rejection_feedback(const Rejection& rejection) {
    std::string reasons;
    for (RejectReason r : rejection.reasons) {
        if (!reasons.empty()) reasons += ", ";
        reasons += to_string(r);
    }
    return "Your previous answer was rejected (" + reasons + "): " + rejection.detail +
           ". Return a corrected version of only the requested definition.";
}

}  // namespace halgen
