/*
 * Copyright (c) 2026 halgen contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "halgen/c_ast/source_span.hpp"

namespace halgen::ast {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

//=== types ===//

enum class BaseType { Void, U8, U16, U32, I32 };

struct CType {
    BaseType base = BaseType::U32;
    int pointer_depth = 0;
    bool is_volatile = false;

    bool is_pointer() const noexcept { return pointer_depth > 0; }
    bool operator==(const CType&) const = default;
};

inline constexpr int kMaxPointerDepth = 2;

std::string_view base_type_name(BaseType base);

//=== expressions ===//

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Ident {
    std::string name;
};

struct IntLit {
    std::uint64_t value = 0;
    /// Original spelling ("0x20", "1U"); the printer reproduces it verbatim.
    std::string spelling;

    bool is_decimal() const noexcept {
        return spelling.size() < 2 || (spelling[1] != 'x' && spelling[1] != 'X');
    }
};

enum class UnaryOp { Deref, AddrOf, BitNot, LogNot, Neg, PreInc, PreDec, PostInc, PostDec };

struct Unary {
    UnaryOp op;
    ExprPtr operand;
};

enum class BinaryOp {
    Add, Sub, Mul, Div, Mod,
    Shl, Shr,
    BitAnd, BitOr, BitXor,
    LogAnd, LogOr,
    Eq, Ne, Lt, Gt, Le, Ge,
};

struct Binary {
    BinaryOp op;
    ExprPtr lhs;
    ExprPtr rhs;
};

enum class AssignOp { Assign, And, Or, Xor, Shl, Shr, Add, Sub };

struct Assign {
    AssignOp op;
    ExprPtr target;
    ExprPtr value;
};

struct Call {
    std::string callee;
    std::vector<ExprPtr> args;
};

struct Cast {
    CType type;
    ExprPtr operand;
};

struct Paren {
    ExprPtr inner;
};

struct Expr {
    std::variant<Ident, IntLit, Unary, Binary, Assign, Call, Cast, Paren> node;
    SourceSpan span;

    template <class T>
    const T* as() const noexcept {
        return std::get_if<T>(&node);
    }
};

//=== statements ===//

struct Stmt;
using StmtPtr = std::shared_ptr<const Stmt>;

struct Compound {
    std::vector<StmtPtr> stmts;
};

struct ExprStmt {
    ExprPtr expr;
};

struct If {
    ExprPtr cond;
    StmtPtr then_branch;
    StmtPtr else_branch;  // may be null
};

struct While {
    ExprPtr cond;
    StmtPtr body;
};

/// `init` is a LocalDecl or ExprStmt; any of init/cond/step may be null.
struct For {
    StmtPtr init;
    ExprPtr cond;
    ExprPtr step;
    StmtPtr body;
};

struct Return {
    ExprPtr value;  // may be null
};

struct LocalDecl {
    std::string name;
    CType type;
    ExprPtr init;  // may be null
};

struct Stmt {
    std::variant<Compound, ExprStmt, If, While, For, Return, LocalDecl> node;
    SourceSpan span;

    template <class T>
    const T* as() const noexcept {
        return std::get_if<T>(&node);
    }
};

//=== top level ===//

struct Param {
    std::string name;
    CType type;
};

struct FunctionDef {
    std::string name;
    CType return_type;
    std::vector<Param> params;
    StmtPtr body;  // always a Compound
};

struct GlobalDecl {
    std::string name;
    CType type;
    ExprPtr init;  // may be null
};

struct MacroConst {
    std::string name;
    ExprPtr value;
};

/// `path` keeps its delimiters, e.g. `<stdint.h>` or `"hal.h"`.
struct IncludeDirective {
    std::string path;
};

struct TopLevelItem {
    std::variant<FunctionDef, GlobalDecl, MacroConst, IncludeDirective> node;
    SourceSpan span;

    template <class T>
    const T* as() const noexcept {
        return std::get_if<T>(&node);
    }

    /// Defined name, or empty for include directives.
    const std::string& name() const noexcept;
    bool is_definition() const noexcept { return !as<IncludeDirective>(); }
};

struct TranslationUnit {
    std::string file_id;
    std::vector<TopLevelItem> items;
    /// Text the spans point into.
    std::string source;

    const TopLevelItem* find(std::string_view name) const noexcept;
};

//=== structural equality (spans ignored) ===//

bool operator==(const Expr& a, const Expr& b);
bool operator==(const Stmt& a, const Stmt& b);
bool operator==(const TopLevelItem& a, const TopLevelItem& b);
bool operator==(const TranslationUnit& a, const TranslationUnit& b);

bool equal(const ExprPtr& a, const ExprPtr& b);
bool equal(const StmtPtr& a, const StmtPtr& b);

std::string_view to_string(UnaryOp op);
std::string_view to_string(BinaryOp op);
std::string_view to_string(AssignOp op);

}  // namespace halgen::ast
