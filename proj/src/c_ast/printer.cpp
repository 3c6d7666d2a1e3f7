/*
 * Copyright (c) 2026 halgen contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */
#include "halgen/c_ast/printer.hpp"

namespace halgen {
namespace {

using namespace ast;

constexpr int kAssignPrec = 0;
constexpr int kUnaryPrec = 11;
constexpr int kPostfixPrec = 12;

int binary_prec(BinaryOp op) {
    switch (op) {
        case BinaryOp::Mul:
        case BinaryOp::Div:
        case BinaryOp::Mod: return 10;
        case BinaryOp::Add:
        case BinaryOp::Sub: return 9;
        case BinaryOp::Shl:
        case BinaryOp::Shr: return 8;
        case BinaryOp::Lt:
        case BinaryOp::Gt:
        case BinaryOp::Le:
        case BinaryOp::Ge: return 7;
        case BinaryOp::Eq:
        case BinaryOp::Ne: return 6;
        case BinaryOp::BitAnd: return 5;
        case BinaryOp::BitXor: return 4;
        case BinaryOp::BitOr: return 3;
        case BinaryOp::LogAnd: return 2;
        case BinaryOp::LogOr: return 1;
    }
    return 0;
}

int precedence(const Expr& e) {
    return std::visit(overloaded{
                          [](const Assign&) { return kAssignPrec; },
                          [](const Binary& b) { return binary_prec(b.op); },
                          [](const Unary& u) {
                              return u.op == UnaryOp::PostInc || u.op == UnaryOp::PostDec ? kPostfixPrec : kUnaryPrec;
                          },
                          [](const Cast&) { return kUnaryPrec; },
                          [](const auto&) { return kPostfixPrec; },
                      },
                      e.node);
}

std::string expr_at(const Expr& e, int min_prec);

std::string render(const Expr& e) {
    return std::visit(
        overloaded{
            [](const Ident& x) { return x.name; },
            [](const IntLit& x) { return x.spelling.empty() ? std::to_string(x.value) : x.spelling; },
            [](const Unary& x) {
                const std::string op(to_string(x.op));
                if (x.op == UnaryOp::PostInc || x.op == UnaryOp::PostDec) {
                    return expr_at(*x.operand, kPostfixPrec) + op;
                }
                std::string operand = expr_at(*x.operand, kUnaryPrec);
                // "- -x" and "& &x" must not fuse into "--" / "&&".
                if (!operand.empty() && operand.front() == op.back() && (op.back() == '-' || op.back() == '&')) {
                    return op + " " + operand;
                }
                return op + operand;
            },
            [](const Binary& x) {
                const int p = binary_prec(x.op);
                return expr_at(*x.lhs, p) + " " + std::string(to_string(x.op)) + " " + expr_at(*x.rhs, p + 1);
            },
            [](const Assign& x) {
                return expr_at(*x.target, kUnaryPrec) + " " + std::string(to_string(x.op)) + " " +
                       expr_at(*x.value, kAssignPrec);
            },
            [](const Call& x) {
                std::string out = x.callee + "(";
                for (std::size_t i = 0; i < x.args.size(); ++i) {
                    if (i) out += ", ";
                    out += expr_at(*x.args[i], kAssignPrec);
                }
                return out + ")";
            },
            [](const Cast& x) { return "(" + print_type(x.type) + ")" + expr_at(*x.operand, kUnaryPrec); },
            [](const Paren& x) { return "(" + expr_at(*x.inner, kAssignPrec) + ")"; },
        },
        e.node);
}

std::string expr_at(const Expr& e, int min_prec) {
    std::string s = render(e);
    return precedence(e) < min_prec ? "(" + s + ")" : s;
}

std::string declaration(const CType& t, const std::string& name) {
    std::string out = t.is_volatile ? "volatile " : "";
    out += base_type_name(t.base);
    out += ' ';
    out.append(static_cast<std::size_t>(t.pointer_depth), '*');
    return out + name;
}

std::string pad(int indent) { return std::string(static_cast<std::size_t>(indent) * 4, ' '); }

std::string local_decl(const LocalDecl& d) {
    std::string out = declaration(d.type, d.name);
    if (d.init) out += " = " + print_expr(*d.init);
    return out;
}

std::string block_body(const Compound& c, int indent) {
    std::string out;
    for (const StmtPtr& s : c.stmts) out += print_stmt(*s, indent);
    return out;
}

// Statement used as the body of if/while/for. Returns text without a trailing newline.
std::string branch(const Stmt& s, int indent) {
    if (auto* c = s.as<Compound>()) return " {\n" + block_body(*c, indent + 1) + pad(indent) + "}";
    std::string inner = print_stmt(s, indent + 1);
    inner.pop_back();
    return "\n" + inner;
}

}  // namespace

std::string print_type(const CType& t) {
    std::string out = t.is_volatile ? "volatile " : "";
    out += base_type_name(t.base);
    if (t.pointer_depth > 0) {
        out += ' ';
        out.append(static_cast<std::size_t>(t.pointer_depth), '*');
    }
    return out;
}

std::string print_expr(const Expr& expr) { return render(expr); }

std::string print_stmt(const Stmt& stmt, int indent) {
    const std::string ind = pad(indent);
    return std::visit(
        overloaded{
            [&](const Compound& c) { return ind + "{\n" + block_body(c, indent + 1) + ind + "}\n"; },
            [&](const ExprStmt& s) { return ind + print_expr(*s.expr) + ";\n"; },
            [&](const LocalDecl& d) { return ind + local_decl(d) + ";\n"; },
            [&](const Return& r) { return ind + (r.value ? "return " + print_expr(*r.value) + ";\n" : "return;\n"); },
            [&](const While& w) { return ind + "while (" + print_expr(*w.cond) + ")" + branch(*w.body, indent) + "\n"; },
            [&](const For& f) {
                std::string init;
                if (f.init) {
                    if (auto* d = f.init->as<LocalDecl>()) init = local_decl(*d);
                    else init = print_expr(*f.init->as<ExprStmt>()->expr);
                }
                std::string head = "for (" + init + ";";
                if (f.cond) head += " " + print_expr(*f.cond);
                head += ";";
                if (f.step) head += " " + print_expr(*f.step);
                return ind + head + ")" + branch(*f.body, indent) + "\n";
            },
            [&](const If& s) {
                std::string out = ind + "if (" + print_expr(*s.cond) + ")" + branch(*s.then_branch, indent);
                if (s.else_branch) {
                    out += s.then_branch->as<Compound>() ? " else" : "\n" + ind + "else";
                    if (s.else_branch->as<If>()) {
                        std::string chained = print_stmt(*s.else_branch, indent);
                        chained.pop_back();
                        out += " " + chained.substr(ind.size());
                    } else {
                        out += branch(*s.else_branch, indent);
                    }
                }
                return out + "\n";
            },
        },
        stmt.node);
}

std::string print_item(const TopLevelItem& item) {
    return std::visit(
        overloaded{
            [](const IncludeDirective& i) { return "#include " + i.path + "\n"; },
            [](const MacroConst& m) { return "#define " + m.name + " " + print_expr(*m.value) + "\n"; },
            [](const GlobalDecl& g) {
                std::string out = declaration(g.type, g.name);
                if (g.init) out += " = " + print_expr(*g.init);
                return out + ";\n";
            },
            [](const FunctionDef& f) {
                std::string out = declaration(f.return_type, f.name) + "(";
                if (f.params.empty()) out += "void";
                for (std::size_t i = 0; i < f.params.size(); ++i) {
                    if (i) out += ", ";
                    out += declaration(f.params[i].type, f.params[i].name);
                }
                return out + ")" + branch(*f.body, 0) + "\n";
            },
        },
        item.node);
}

std::string pretty_print(const TranslationUnit& unit) {
    std::string out;
    for (std::size_t i = 0; i < unit.items.size(); ++i) {
        const TopLevelItem& item = unit.items[i];
        if (i > 0) {
            const TopLevelItem& prev = unit.items[i - 1];
            const bool prev_const = prev.as<MacroConst>() || prev.as<GlobalDecl>();
            const bool cur_const = item.as<MacroConst>() || item.as<GlobalDecl>();
            const bool same_group = (prev_const && cur_const) ||
                                    (prev.as<IncludeDirective>() && item.as<IncludeDirective>());
            if (!same_group) out += "\n";
        }
        out += print_item(item);
    }
    return out;
}

}  // namespace halgen
