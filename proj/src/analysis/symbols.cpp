/*
 * Copyright (c) 2026 halgen contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */
#include "halgen/analysis/symbols.hpp"

#include <algorithm>
#include <regex>
#include <set>
#include <tuple>

#include "halgen/c_ast/printer.hpp"
#include "halgen/error.hpp"

namespace halgen {

using namespace ast;

std::string_view to_string(DefinitionKind kind) {
    switch (kind) {
        case DefinitionKind::Function: return "Function";
        case DefinitionKind::Constant: return "Constant";
        case DefinitionKind::Global: return "Global";
    }
    return "?";
}

std::string_view to_string(ElementKind kind) { return kind == ElementKind::Function ? "Function" : "Constant"; }

namespace {

class ReferenceCollector {
public:
    ReferenceCollector(SymbolTable& table, std::size_t unit_index) : table_(table), unit_index_(unit_index) {}

    void item(const TopLevelItem& item) {
        std::visit(overloaded{
                       [&](const FunctionDef& f) {
                           scopes_.assign(1, {});
                           for (const Param& p : f.params) scopes_.back().insert(p.name);
                           stmt(*f.body);
                           scopes_.clear();
                       },
                       [&](const GlobalDecl& g) {
                           if (g.init) expr(*g.init, true);
                       },
                       [&](const MacroConst& m) { expr(*m.value, true); },
                       [](const IncludeDirective&) {},
                   },
                   item.node);
    }

private:
    bool is_local(const std::string& name) const {
        return std::any_of(scopes_.begin(), scopes_.end(), [&](const auto& s) { return s.count(name) > 0; });
    }

    void add(const std::string& name, Reference ref) { table_.references[name].push_back(std::move(ref)); }

    void stmt(const Stmt& s) {
        std::visit(overloaded{
                       [&](const Compound& c) {
                           scopes_.emplace_back();
                           for (const auto& child : c.stmts) stmt(*child);
                           scopes_.pop_back();
                       },
                       [&](const ExprStmt& e) { expr(*e.expr, false); },
                       [&](const If& i) {
                           expr(*i.cond, true);
                           stmt(*i.then_branch);
                           if (i.else_branch) stmt(*i.else_branch);
                       },
                       [&](const While& w) {
                           expr(*w.cond, true);
                           stmt(*w.body);
                       },
                       [&](const For& f) {
                           scopes_.emplace_back();
                           if (f.init) stmt(*f.init);
                           if (f.cond) expr(*f.cond, true);
                           if (f.step) expr(*f.step, false);
                           stmt(*f.body);
                           scopes_.pop_back();
                       },
                       [&](const Return& r) {
                           if (r.value) expr(*r.value, true);
                       },
                       [&](const LocalDecl& d) {
                           // The initializer is evaluated before the name is in scope.
                           if (d.init) expr(*d.init, true);
                           scopes_.back().insert(d.name);
                       },
                   },
                   s.node);
    }

    void expr(const Expr& e, bool consumed) {
        std::visit(overloaded{
                       [&](const Ident& id) {
                           if (!is_local(id.name)) add(id.name, Reference{SiteKind::Use, e.span, unit_index_, {}, consumed});
                       },
                       [](const IntLit&) {},
                       [&](const Unary& u) { expr(*u.operand, true); },
                       [&](const Binary& b) {
                           expr(*b.lhs, true);
                           expr(*b.rhs, true);
                       },
                       [&](const Assign& a) {
                           expr(*a.target, false);
                           expr(*a.value, true);
                       },
                       [&](const Call& c) {
                           if (!is_local(c.callee)) {
                               add(c.callee, Reference{SiteKind::Call, e.span, unit_index_, c.args, consumed});
                           }
                           for (const auto& arg : c.args) expr(*arg, true);
                       },
                       [&](const Cast& c) {
                           const bool to_void = c.type.base == BaseType::Void && !c.type.is_pointer();
                           expr(*c.operand, consumed && !to_void);
                       },
                       [&](const Paren& p) { expr(*p.inner, consumed); },
                   },
                   e.node);
    }

    SymbolTable& table_;
    std::size_t unit_index_;
    std::vector<std::set<std::string>> scopes_;
};

void add_definitions(SymbolTable& table, const TranslationUnit& unit, std::size_t unit_index) {
    for (const TopLevelItem& item : unit.items) {
        if (!item.is_definition()) continue;
        Definition def{DefinitionKind::Constant, std::nullopt, item.span, unit_index};
        if (auto* f = item.as<FunctionDef>()) {
            def.kind = DefinitionKind::Function;
            Signature sig{f->return_type, {}};
            for (const Param& p : f->params) sig.param_types.push_back(p.type);
            def.signature = std::move(sig);
        } else if (item.as<GlobalDecl>()) {
            def.kind = DefinitionKind::Global;
        }
        auto [it, inserted] = table.definitions.emplace(item.name(), def);
        if (!inserted) throw DuplicateDefinition(item.name(), {it->second.span, item.span});
    }
}

}  // namespace

SymbolTable build_symbol_table(const Project& project) {
    SymbolTable table;
    for (std::size_t i = 0; i < project.units.size(); ++i) add_definitions(table, project.units[i], i);
    for (std::size_t i = 0; i < project.units.size(); ++i) {
        ReferenceCollector collector(table, i);
        for (const TopLevelItem& item : project.units[i].items) collector.item(item);
    }
    return table;
}

SymbolTable build_symbol_table(const TranslationUnit& unit) {
    SymbolTable table;
    add_definitions(table, unit, 0);
    ReferenceCollector collector(table, 0);
    for (const TopLevelItem& item : unit.items) collector.item(item);
    return table;
}

std::vector<MissingElement> detect_missing(const SymbolTable& table) {
    using Key = std::tuple<std::size_t, std::uint32_t, std::uint32_t, std::string>;
    std::vector<std::pair<Key, MissingElement>> found;
    for (const auto& [name, refs] : table.references) {
        if (refs.empty() || table.definitions.count(name)) continue;
        MissingElement m{name, ElementKind::Constant, 0, {}, false, refs.front().span};
        const Reference* first_call = nullptr;
        for (const Reference& r : refs) {
            m.value_consumed = m.value_consumed || r.value_consumed;
            if (r.site != SiteKind::Call) continue;
            if (!first_call) {
                first_call = &r;
            } else if (r.call_args.size() != first_call->call_args.size()) {
                throw ConflictingArity(name);
            }
        }
        if (first_call) {
            m.kind = ElementKind::Function;
            m.arity = first_call->call_args.size();
            for (const auto& arg : first_call->call_args) m.sample_args.push_back(print_expr(*arg));
        }
        const Reference& first = refs.front();
        found.emplace_back(Key{first.unit_index, first.span.start_line, first.span.start_col, name}, std::move(m));
    }
    std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<MissingElement> out;
    out.reserve(found.size());
    for (auto& [key, m] : found) out.push_back(std::move(m));
    return out;
}

Signature infer_signature(const MissingElement& element) {
    Signature sig;
    sig.return_type = CType{element.value_consumed ? BaseType::U32 : BaseType::Void, 0, false};
    for (const std::string& arg : element.sample_args) {
        CType t{BaseType::U32, 0, false};
        static const std::regex kDecimal("(0|[1-9][0-9]{0,2})[uUlL]{0,3}");
        std::smatch m;
        if (std::regex_match(arg, m, kDecimal) && std::stoul(m[1].str()) <= 255) t.base = BaseType::U8;
        sig.param_types.push_back(t);
    }
    return sig;
}

}  // namespace halgen
