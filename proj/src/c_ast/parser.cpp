/*
 * Copyright (c) 2026 halgen contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */
#include "halgen/c_ast/parser.hpp"

#include <set>
#include <string>

#include "halgen/c_ast/lexer.hpp"
#include "halgen/error.hpp"

namespace halgen {
namespace {

using namespace ast;

struct BinaryLevel {
    int precedence;
    BinaryOp op;
};

// C precedence for the supported binary operators; higher binds tighter.
std::optional<BinaryLevel> binary_level(std::string_view p) {
    if (p == "*") return BinaryLevel{10, BinaryOp::Mul};
    if (p == "/") return BinaryLevel{10, BinaryOp::Div};
    if (p == "%") return BinaryLevel{10, BinaryOp::Mod};
    if (p == "+") return BinaryLevel{9, BinaryOp::Add};
    if (p == "-") return BinaryLevel{9, BinaryOp::Sub};
    if (p == "<<") return BinaryLevel{8, BinaryOp::Shl};
    if (p == ">>") return BinaryLevel{8, BinaryOp::Shr};
    if (p == "<") return BinaryLevel{7, BinaryOp::Lt};
    if (p == ">") return BinaryLevel{7, BinaryOp::Gt};
    if (p == "<=") return BinaryLevel{7, BinaryOp::Le};
    if (p == ">=") return BinaryLevel{7, BinaryOp::Ge};
    if (p == "==") return BinaryLevel{6, BinaryOp::Eq};
    if (p == "!=") return BinaryLevel{6, BinaryOp::Ne};
    if (p == "&") return BinaryLevel{5, BinaryOp::BitAnd};
    if (p == "^") return BinaryLevel{4, BinaryOp::BitXor};
    if (p == "|") return BinaryLevel{3, BinaryOp::BitOr};
    if (p == "&&") return BinaryLevel{2, BinaryOp::LogAnd};
    if (p == "||") return BinaryLevel{1, BinaryOp::LogOr};
    return std::nullopt;
}

std::optional<AssignOp> assign_op(std::string_view p) {
    if (p == "=") return AssignOp::Assign;
    if (p == "&=") return AssignOp::And;
    if (p == "|=") return AssignOp::Or;
    if (p == "^=") return AssignOp::Xor;
    if (p == "<<=") return AssignOp::Shl;
    if (p == ">>=") return AssignOp::Shr;
    if (p == "+=") return AssignOp::Add;
    if (p == "-=") return AssignOp::Sub;
    return std::nullopt;
}

bool is_type_start(const Token& t) {
    if (t.kind != TokenKind::Keyword) return false;
    return t.text == "void" || t.text == "uint8_t" || t.text == "uint16_t" || t.text == "uint32_t" ||
           t.text == "int" || t.text == "unsigned" || t.text == "volatile";
}

bool is_lvalue(const Expr& e) {
    if (auto* p = e.as<Paren>()) return is_lvalue(*p->inner);
    if (e.as<Ident>()) return true;
    if (auto* u = e.as<Unary>()) return u->op == UnaryOp::Deref;
    return false;
}

class Parser {
public:
    Parser(std::vector<Token> tokens, std::string_view file_id, std::string_view source)
        : tokens_(std::move(tokens)), limit_(tokens_.size()), file_id_(file_id), source_(source) {}

    TranslationUnit unit() {
        TranslationUnit tu;
        tu.file_id = std::string(file_id_);
        tu.source = std::string(source_);
        while (!at_end()) tu.items.push_back(top_level_item());
        return tu;
    }

    ExprPtr standalone_expression() {
        ExprPtr e = expression();
        if (!at_end()) fail(peek(), "expected end of expression");
        return e;
    }

private:
    //--- token access ---//

    bool at_end() const { return pos_ >= limit_; }

    const Token& peek(std::size_t ahead = 0) const {
        static const Token kEof{TokenKind::Punct, "", {}, 0};
        return pos_ + ahead < limit_ ? tokens_[pos_ + ahead] : kEof;
    }

    bool at(std::string_view text, std::size_t ahead = 0) const {
        const Token& t = peek(ahead);
        return pos_ + ahead < limit_ && t.kind != TokenKind::IntLit && t.text == text;
    }

    const Token& take() {
        if (at_end()) fail(peek(), "unexpected end of input");
        return tokens_[pos_++];
    }

    const Token& expect(std::string_view text) {
        if (!at(text)) fail(peek(), "expected '" + std::string(text) + "'");
        return take();
    }

    const Token& expect_ident(std::string_view what) {
        if (peek().kind != TokenKind::Ident || at_end()) fail(peek(), "expected " + std::string(what));
        return take();
    }

    SourceSpan eof_span() const {
        SourceSpan s{std::string(file_id_), 1, 1, 1, 1, source_.size(), source_.size()};
        if (!tokens_.empty()) {
            const SourceSpan& last = (limit_ > 0 ? tokens_[limit_ - 1] : tokens_.back()).span;
            s = last;
            s.start_line = last.end_line;
            s.start_col = last.end_col;
            s.begin_offset = last.end_offset;
        }
        return s;
    }

    [[noreturn]] void fail(const Token& near, const std::string& message) const {
        if (pos_ >= limit_ || near.text.empty()) {
            throw ParseError(eof_span(), message + " at end of input");
        }
        throw ParseError(near.span, message + ", found '" + near.text + "'");
    }

    [[noreturn]] void unsupported(const Token& t) const {
        throw ParseError(t.span, "'" + t.text + "' is not supported by the C subset");
    }

    SourceSpan span_since(std::size_t first) const {
        const std::size_t last = pos_ > first ? pos_ - 1 : first;
        return SourceSpan::merge(tokens_[first].span, tokens_[last].span);
    }

    //--- types ---//

    CType type() {
        CType ct;
        bool has_base = false;
        while (!at_end() && peek().kind == TokenKind::Keyword) {
            const Token& t = peek();
            if (t.text == "volatile") {
                ct.is_volatile = true;
            } else if (t.text == "void" || t.text == "uint8_t" || t.text == "uint16_t" || t.text == "uint32_t" ||
                       t.text == "int") {
                if (has_base) {
                    if (!(t.text == "int" && ct.base == BaseType::U32)) fail(t, "conflicting type specifiers");
                } else {
                    ct.base = t.text == "void"       ? BaseType::Void
                              : t.text == "uint8_t"  ? BaseType::U8
                              : t.text == "uint16_t" ? BaseType::U16
                              : t.text == "uint32_t" ? BaseType::U32
                                                     : BaseType::I32;
                    has_base = true;
                }
            } else if (t.text == "unsigned") {
                if (has_base) fail(t, "conflicting type specifiers");
                ct.base = BaseType::U32;
                has_base = true;
            } else {
                unsupported(t);
            }
            take();
        }
        if (!has_base) fail(peek(), "expected a type");
        while (at("*")) {
            const Token& star = take();
            if (++ct.pointer_depth > kMaxPointerDepth) {
                throw ParseError(star.span, "pointer depth above 2 is not supported");
            }
            if (at("volatile")) unsupported(peek());
        }
        return ct;
    }

    void reject_array_suffix() {
        if (at("[")) throw ParseError(peek().span, "arrays are not supported by the C subset");
    }

    //--- top level ---//

    TopLevelItem top_level_item() {
        const Token& t = peek();
        if (t.kind == TokenKind::Directive) return directive();
        if (t.kind == TokenKind::Keyword && !is_type_start(t)) unsupported(t);
        const std::size_t first = pos_;
        const CType ct = type();
        const Token& name = expect_ident("a declaration name");
        if (at("(")) return function(first, ct, name.text);
        reject_array_suffix();
        if (ct.base == BaseType::Void && ct.pointer_depth == 0) {
            throw ParseError(name.span, "variable '" + name.text + "' declared void");
        }
        GlobalDecl g{name.text, ct, nullptr};
        if (at("=")) {
            take();
            g.init = assignment();
        }
        if (at(",")) throw ParseError(peek().span, "multiple declarators are not supported");
        expect(";");
        return TopLevelItem{std::move(g), span_since(first)};
    }

    TopLevelItem directive() {
        const std::size_t first = pos_;
        const Token& d = take();
        std::string word = d.text.substr(1);
        word.erase(0, word.find_first_not_of(" \t"));
        if (word.starts_with("include")) {
            std::string path = word.substr(std::string_view("include").size());
            path.erase(0, path.find_first_not_of(" \t"));
            if (path.size() < 2 || !((path.front() == '<' && path.back() == '>') ||
                                     (path.front() == '"' && path.back() == '"'))) {
                throw ParseError(d.span, "malformed #include directive");
            }
            return TopLevelItem{IncludeDirective{path}, d.span};
        }
        if (word != "define") {
            throw ParseError(d.span, "preprocessor directive '#" + word + "' is not supported");
        }
        const std::uint32_t line = d.span.start_line;
        if (at_end() || peek().span.start_line != line) throw ParseError(d.span, "#define without a name");
        const Token& name = expect_ident("a macro name");
        if (at("(") && peek().span.begin_offset == name.span.end_offset) {
            throw ParseError(peek().span, "function-like macros are not supported");
        }
        std::size_t line_end = pos_;
        while (line_end < limit_ && tokens_[line_end].span.start_line == line) ++line_end;
        if (line_end == pos_) throw ParseError(name.span, "#define '" + name.text + "' has no value");
        const std::size_t saved_limit = limit_;
        limit_ = line_end;
        ExprPtr value = expression();
        if (!at_end()) fail(peek(), "expected end of #define");
        limit_ = saved_limit;
        check_constant_expression(*value);
        return TopLevelItem{MacroConst{name.text, std::move(value)}, span_since(first)};
    }

    void check_constant_expression(const Expr& e) const {
        std::visit(overloaded{
                       [](const Ident&) {},
                       [](const IntLit&) {},
                       [&](const Unary& u) {
                           if (u.op != UnaryOp::BitNot && u.op != UnaryOp::Neg && u.op != UnaryOp::LogNot) {
                               throw ParseError(e.span, "#define value must be a constant expression");
                           }
                           check_constant_expression(*u.operand);
                       },
                       [&](const Binary& b) {
                           check_constant_expression(*b.lhs);
                           check_constant_expression(*b.rhs);
                       },
                       [&](const Cast& c) {
                           if (c.type.is_pointer()) {
                               throw ParseError(e.span, "#define value must be a constant expression");
                           }
                           check_constant_expression(*c.operand);
                       },
                       [&](const Paren& p) { check_constant_expression(*p.inner); },
                       [&](const auto&) {
                           throw ParseError(e.span, "#define value must be a constant expression");
                       },
                   },
                   e.node);
    }

    TopLevelItem function(std::size_t first, CType ret, std::string name) {
        expect("(");
        std::vector<Param> params;
        if (at("void") && at(")", 1)) {
            take();
        } else if (!at(")")) {
            std::set<std::string, std::less<>> names;
            for (;;) {
                if (at("...")) unsupported(peek());
                const CType pt = type();
                if (pt.base == BaseType::Void && pt.pointer_depth == 0) {
                    fail(peek(), "parameter declared void");
                }
                const Token& pn = expect_ident("a parameter name");
                reject_array_suffix();
                if (!names.insert(pn.text).second) {
                    throw ParseError(pn.span, "duplicate parameter name '" + pn.text + "'");
                }
                params.push_back(Param{pn.text, pt});
                if (!at(",")) break;
                take();
            }
        }
        expect(")");
        if (at(";")) {
            throw ParseError(peek().span, "function declarations without a body are not supported");
        }
        if (!at("{")) fail(peek(), "expected '{' to start the body of '" + name + "'");
        StmtPtr body = compound();
        return TopLevelItem{FunctionDef{std::move(name), ret, std::move(params), std::move(body)}, span_since(first)};
    }

    //--- statements ---//

    StmtPtr make_stmt(decltype(Stmt::node) node, std::size_t first) const {
        return std::make_shared<const Stmt>(Stmt{std::move(node), span_since(first)});
    }

    StmtPtr compound() {
        const std::size_t first = pos_;
        expect("{");
        Compound c;
        while (!at("}")) {
            if (at_end()) fail(peek(), "expected '}'");
            c.stmts.push_back(statement());
        }
        take();
        return make_stmt(std::move(c), first);
    }

    StmtPtr local_decl(bool require_semicolon = true) {
        const std::size_t first = pos_;
        const CType ct = type();
        const Token& name = expect_ident("a variable name");
        reject_array_suffix();
        if (ct.base == BaseType::Void && ct.pointer_depth == 0) {
            throw ParseError(name.span, "variable '" + name.text + "' declared void");
        }
        LocalDecl d{name.text, ct, nullptr};
        if (at("=")) {
            take();
            d.init = assignment();
        }
        if (at(",")) throw ParseError(peek().span, "multiple declarators are not supported");
        if (require_semicolon) expect(";");
        return make_stmt(std::move(d), first);
    }

    StmtPtr statement() {
        const std::size_t first = pos_;
        const Token& t = peek();
        if (at("{")) return compound();
        if (at(";")) {
            take();
            return make_stmt(Compound{}, first);
        }
        if (t.kind == TokenKind::Keyword) {
            if (is_type_start(t)) return local_decl();
            if (t.text == "if") {
                take();
                expect("(");
                ExprPtr cond = expression();
                expect(")");
                StmtPtr then_branch = statement();
                StmtPtr else_branch;
                if (at("else")) {
                    take();
                    else_branch = statement();
                }
                return make_stmt(If{std::move(cond), std::move(then_branch), std::move(else_branch)}, first);
            }
            if (t.text == "while") {
                take();
                expect("(");
                ExprPtr cond = expression();
                expect(")");
                StmtPtr body = statement();
                return make_stmt(While{std::move(cond), std::move(body)}, first);
            }
            if (t.text == "for") {
                take();
                expect("(");
                For f;
                if (!at(";")) {
                    if (is_type_start(peek())) {
                        f.init = local_decl(false);
                    } else {
                        const std::size_t init_first = pos_;
                        ExprPtr e = expression();
                        f.init = make_stmt(ExprStmt{std::move(e)}, init_first);
                    }
                }
                expect(";");
                if (!at(";")) f.cond = expression();
                expect(";");
                if (!at(")")) f.step = expression();
                expect(")");
                f.body = statement();
                return make_stmt(std::move(f), first);
            }
            if (t.text == "return") {
                take();
                Return r;
                if (!at(";")) r.value = expression();
                expect(";");
                return make_stmt(std::move(r), first);
            }
            if (t.text == "else") fail(t, "'else' without 'if'");
            unsupported(t);
        }
        ExprPtr e = expression();
        expect(";");
        return make_stmt(ExprStmt{std::move(e)}, first);
    }

    //--- expressions ---//

    ExprPtr make_expr(decltype(Expr::node) node, std::size_t first) const {
        return std::make_shared<const Expr>(Expr{std::move(node), span_since(first)});
    }

    ExprPtr expression() { return assignment(); }

    ExprPtr assignment() {
        const std::size_t first = pos_;
        ExprPtr lhs = binary(1);
        if (at("?")) unsupported(peek());
        if (!at_end() && peek().kind == TokenKind::Punct) {
            if (auto op = assign_op(peek().text)) {
                if (!is_lvalue(*lhs)) throw ParseError(lhs->span, "assignment target is not an lvalue");
                take();
                ExprPtr rhs = assignment();
                return make_expr(Assign{*op, std::move(lhs), std::move(rhs)}, first);
            }
            if (peek().text == "*=" || peek().text == "/=" || peek().text == "%=") unsupported(peek());
        }
        return lhs;
    }

    ExprPtr binary(int min_precedence) {
        const std::size_t first = pos_;
        ExprPtr lhs = unary();
        for (;;) {
            if (at_end() || peek().kind != TokenKind::Punct) return lhs;
            const auto level = binary_level(peek().text);
            if (!level || level->precedence < min_precedence) return lhs;
            take();
            ExprPtr rhs = binary(level->precedence + 1);
            lhs = make_expr(Binary{level->op, std::move(lhs), std::move(rhs)}, first);
        }
    }

    ExprPtr unary() {
        const std::size_t first = pos_;
        const Token& t = peek();
        if (!at_end() && t.kind == TokenKind::Punct) {
            std::optional<UnaryOp> op;
            if (t.text == "*") op = UnaryOp::Deref;
            else if (t.text == "&") op = UnaryOp::AddrOf;
            else if (t.text == "~") op = UnaryOp::BitNot;
            else if (t.text == "!") op = UnaryOp::LogNot;
            else if (t.text == "-") op = UnaryOp::Neg;
            else if (t.text == "++") op = UnaryOp::PreInc;
            else if (t.text == "--") op = UnaryOp::PreDec;
            if (op) {
                take();
                ExprPtr operand = unary();
                if ((*op == UnaryOp::PreInc || *op == UnaryOp::PreDec) && !is_lvalue(*operand)) {
                    throw ParseError(operand->span, "increment target is not an lvalue");
                }
                if (*op == UnaryOp::AddrOf && !is_lvalue(*operand)) {
                    throw ParseError(operand->span, "cannot take the address of an rvalue");
                }
                return make_expr(Unary{*op, std::move(operand)}, first);
            }
            if (t.text == "(" && is_type_start(peek(1))) {
                take();
                const CType ct = type();
                expect(")");
                ExprPtr operand = unary();
                return make_expr(Cast{ct, std::move(operand)}, first);
            }
        }
        if (t.kind == TokenKind::Keyword && t.text == "sizeof") unsupported(t);
        return postfix();
    }

    ExprPtr postfix() {
        const std::size_t first = pos_;
        ExprPtr e = primary();
        for (;;) {
            if (at("++") || at("--")) {
                const bool inc = peek().text == "++";
                if (!is_lvalue(*e)) throw ParseError(e->span, "increment target is not an lvalue");
                take();
                e = make_expr(Unary{inc ? UnaryOp::PostInc : UnaryOp::PostDec, std::move(e)}, first);
            } else if (at("[")) {
                throw ParseError(peek().span, "arrays are not supported by the C subset");
            } else if (at(".") || at("->")) {
                throw ParseError(peek().span, "structs are not supported by the C subset");
            } else if (at("(")) {
                throw ParseError(peek().span, "only plain identifiers may be called");
            } else {
                return e;
            }
        }
    }

    ExprPtr primary() {
        const std::size_t first = pos_;
        if (at_end()) fail(peek(), "expected an expression");
        const Token& t = peek();
        switch (t.kind) {
            case TokenKind::IntLit: {
                take();
                return make_expr(IntLit{t.value, t.text}, first);
            }
            case TokenKind::Ident: {
                take();
                if (at("(")) {
                    take();
                    Call call{t.text, {}};
                    if (!at(")")) {
                        for (;;) {
                            call.args.push_back(assignment());
                            if (!at(",")) break;
                            take();
                        }
                    }
                    expect(")");
                    return make_expr(std::move(call), first);
                }
                return make_expr(Ident{t.text}, first);
            }
            case TokenKind::Punct:
                if (t.text == "(") {
                    take();
                    ExprPtr inner = expression();
                    expect(")");
                    return make_expr(Paren{std::move(inner)}, first);
                }
                fail(t, "expected an expression");
            case TokenKind::Keyword: unsupported(t);
            case TokenKind::Directive:
                throw ParseError(t.span, "preprocessor directive inside a declaration");
        }
        fail(t, "expected an expression");
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    std::size_t limit_;
    std::string_view file_id_;
    std::string_view source_;
};

}  // namespace

ast::TranslationUnit parse(std::string_view source, std::string_view file_id) {
    return Parser(lex(source, file_id), file_id, source).unit();
}

ast::ExprPtr parse_expression(std::string_view source, std::string_view file_id) {
    return Parser(lex(source, file_id), file_id, source).standalone_expression();
}

}  // namespace halgen
