/*
 * Copyright (c) 2026 halgen contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */
#include "halgen/c_ast/ast.hpp"

#include <algorithm>

namespace halgen::ast {

std::string_view base_type_name(BaseType base) {
    switch (base) {
        case BaseType::Void: return "void";
        case BaseType::U8: return "uint8_t";
        case BaseType::U16: return "uint16_t";
        case BaseType::U32: return "uint32_t";
        case BaseType::I32: return "int";
    }
    return "?";
}

std::string_view to_string(UnaryOp op) {
    switch (op) {
        case UnaryOp::Deref: return "*";
        case UnaryOp::AddrOf: return "&";
        case UnaryOp::BitNot: return "~";
        case UnaryOp::LogNot: return "!";
        case UnaryOp::Neg: return "-";
        case UnaryOp::PreInc:
        case UnaryOp::PostInc: return "++";
        case UnaryOp::PreDec:
        case UnaryOp::PostDec: return "--";
    }
    return "?";
}

std::string_view to_string(BinaryOp op) {
    switch (op) {
        case BinaryOp::Add: return "+";
        case BinaryOp::Sub: return "-";
        case BinaryOp::Mul: return "*";
        case BinaryOp::Div: return "/";
        case BinaryOp::Mod: return "%";
        case BinaryOp::Shl: return "<<";
        case BinaryOp::Shr: return ">>";
        case BinaryOp::BitAnd: return "&";
        case BinaryOp::BitOr: return "|";
        case BinaryOp::BitXor: return "^";
        case BinaryOp::LogAnd: return "&&";
        case BinaryOp::LogOr: return "||";
        case BinaryOp::Eq: return "==";
        case BinaryOp::Ne: return "!=";
        case BinaryOp::Lt: return "<";
        case BinaryOp::Gt: return ">";
        case BinaryOp::Le: return "<=";
        case BinaryOp::Ge: return ">=";
    }
    return "?";
}

std::string_view to_string(AssignOp op) {
    switch (op) {
        case AssignOp::Assign: return "=";
        case AssignOp::And: return "&=";
        case AssignOp::Or: return "|=";
        case AssignOp::Xor: return "^=";
        case AssignOp::Shl: return "<<=";
        case AssignOp::Shr: return ">>=";
        case AssignOp::Add: return "+=";
        case AssignOp::Sub: return "-=";
    }
    return "?";
}

const std::string& TopLevelItem::name() const noexcept {
    static const std::string kEmpty;
    return std::visit(overloaded{
                          [](const FunctionDef& f) -> const std::string& { return f.name; },
                          [](const GlobalDecl& g) -> const std::string& { return g.name; },
                          [](const MacroConst& m) -> const std::string& { return m.name; },
                          [](const IncludeDirective&) -> const std::string& { return kEmpty; },
                      },
                      node);
}

const TopLevelItem* TranslationUnit::find(std::string_view name) const noexcept {
    auto it = std::find_if(items.begin(), items.end(),
                           [&](const TopLevelItem& item) { return item.is_definition() && item.name() == name; });
    return it == items.end() ? nullptr : &*it;
}

bool equal(const ExprPtr& a, const ExprPtr& b) {
    if (!a || !b) return !a && !b;
    return *a == *b;
}

bool equal(const StmtPtr& a, const StmtPtr& b) {
    if (!a || !b) return !a && !b;
    return *a == *b;
}

namespace {

bool equal_all(const std::vector<ExprPtr>& a, const std::vector<ExprPtr>& b) {
    return std::equal(a.begin(), a.end(), b.begin(), b.end(),
                      [](const ExprPtr& x, const ExprPtr& y) { return equal(x, y); });
}

bool equal_all(const std::vector<StmtPtr>& a, const std::vector<StmtPtr>& b) {
    return std::equal(a.begin(), a.end(), b.begin(), b.end(),
                      [](const StmtPtr& x, const StmtPtr& y) { return equal(x, y); });
}

}  // namespace

bool operator==(const Expr& a, const Expr& b) {
    if (a.node.index() != b.node.index()) return false;
    return std::visit(
        overloaded{
            [&](const Ident& x) { return x.name == std::get<Ident>(b.node).name; },
            [&](const IntLit& x) {
                const auto& y = std::get<IntLit>(b.node);
                return x.value == y.value && x.spelling == y.spelling;
            },
            [&](const Unary& x) {
                const auto& y = std::get<Unary>(b.node);
                return x.op == y.op && equal(x.operand, y.operand);
            },
            [&](const Binary& x) {
                const auto& y = std::get<Binary>(b.node);
                return x.op == y.op && equal(x.lhs, y.lhs) && equal(x.rhs, y.rhs);
            },
            [&](const Assign& x) {
                const auto& y = std::get<Assign>(b.node);
                return x.op == y.op && equal(x.target, y.target) && equal(x.value, y.value);
            },
            [&](const Call& x) {
                const auto& y = std::get<Call>(b.node);
                return x.callee == y.callee && equal_all(x.args, y.args);
            },
            [&](const Cast& x) {
                const auto& y = std::get<Cast>(b.node);
                return x.type == y.type && equal(x.operand, y.operand);
            },
            [&](const Paren& x) { return equal(x.inner, std::get<Paren>(b.node).inner); },
        },
        a.node);
}

bool operator==(const Stmt& a, const Stmt& b) {
    if (a.node.index() != b.node.index()) return false;
    return std::visit(
        overloaded{
            [&](const Compound& x) { return equal_all(x.stmts, std::get<Compound>(b.node).stmts); },
            [&](const ExprStmt& x) { return equal(x.expr, std::get<ExprStmt>(b.node).expr); },
            [&](const If& x) {
                const auto& y = std::get<If>(b.node);
                return equal(x.cond, y.cond) && equal(x.then_branch, y.then_branch) &&
                       equal(x.else_branch, y.else_branch);
            },
            [&](const While& x) {
                const auto& y = std::get<While>(b.node);
                return equal(x.cond, y.cond) && equal(x.body, y.body);
            },
            [&](const For& x) {
                const auto& y = std::get<For>(b.node);
                return equal(x.init, y.init) && equal(x.cond, y.cond) && equal(x.step, y.step) &&
                       equal(x.body, y.body);
            },
            [&](const Return& x) { return equal(x.value, std::get<Return>(b.node).value); },
            [&](const LocalDecl& x) {
                const auto& y = std::get<LocalDecl>(b.node);
                return x.name == y.name && x.type == y.type && equal(x.init, y.init);
            },
        },
        a.node);
}

bool operator==(const TopLevelItem& a, const TopLevelItem& b) {
    if (a.node.index() != b.node.index()) return false;
    return std::visit(
        overloaded{
            [&](const FunctionDef& x) {
                const auto& y = std::get<FunctionDef>(b.node);
                return x.name == y.name && x.return_type == y.return_type &&
                       std::equal(x.params.begin(), x.params.end(), y.params.begin(), y.params.end(),
                                  [](const Param& p, const Param& q) { return p.name == q.name && p.type == q.type; }) &&
                       equal(x.body, y.body);
            },
            [&](const GlobalDecl& x) {
                const auto& y = std::get<GlobalDecl>(b.node);
                return x.name == y.name && x.type == y.type && equal(x.init, y.init);
            },
            [&](const MacroConst& x) {
                const auto& y = std::get<MacroConst>(b.node);
                return x.name == y.name && equal(x.value, y.value);
            },
            [&](const IncludeDirective& x) { return x.path == std::get<IncludeDirective>(b.node).path; },
        },
        a.node);
}

bool operator==(const TranslationUnit& a, const TranslationUnit& b) {
    return a.items == b.items;
}

}  // namespace halgen::ast
