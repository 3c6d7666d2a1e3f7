/*
 * Copyright (c) 2026 halgen contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */
#include "halgen/c_ast/lexer.hpp"

#include <array>
#include <cctype>

#include "halgen/error.hpp"

namespace halgen {
namespace {

// Supported keywords plus reserved C words that the parser rejects by name.
constexpr std::array kKeywords = {
    "void",   "uint8_t", "uint16_t", "uint32_t", "int",     "unsigned", "volatile", "if",
    "else",   "while",   "for",      "return",   "struct",  "union",    "typedef",  "enum",
    "switch", "case",    "default",  "goto",     "do",      "break",    "continue", "char",
    "short",  "long",    "signed",   "const",    "static",  "extern",   "inline",   "sizeof",
    "float",  "double",  "register", "auto",     "_Bool",   "int8_t",   "int16_t",  "int32_t",
    "uint64_t", "int64_t",
};

// Longest first so that greedy matching picks "<<=" before "<<" before "<".
constexpr std::array<std::string_view, 46> kPunctuators = {
    "<<=", ">>=", "...", "&&", "||", "==", "!=", "<=", ">=", "<<", ">>", "&=", "|=", "^=", "+=", "-=",
    "*=",  "/=",  "%=",  "++", "--", "->", "+",  "-",  "*",  "/",  "%",  "&",  "|",  "^",  "~",  "!",
    "=",   "<",   ">",   "(",  ")",  "{",  "}",  "[",  "]",  ";",  ",",  ".",  "?",  ":",
};

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

class Lexer {
public:
    Lexer(std::string_view src, std::string_view file_id, LexOptions options)
        : src_(src), file_id_(file_id), options_(options) {}

    std::vector<Token> run() {
        while (skip_trivia()) {
            const char c = src_[pos_];
            if (c == '#' && at_line_start()) {
                lex_directive();
            } else if (is_ident_start(c)) {
                lex_word();
            } else if (std::isdigit(static_cast<unsigned char>(c))) {
                lex_number();
            } else if (!lex_punct()) {
                if (c == '"' || c == '\'') {
                    fail_or_skip("string and character literals are not supported");
                } else {
                    fail_or_skip(std::string("unexpected character '") + c + "'");
                }
            }
        }
        return std::move(tokens_);
    }

private:
    // Skips whitespace and comments; returns false at end of input.
    bool skip_trivia() {
        while (pos_ < src_.size()) {
            const char c = src_[pos_];
            if (c == '\n' || c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v') {
                advance();
            } else if (src_.substr(pos_, 2) == "//") {
                while (pos_ < src_.size() && src_[pos_] != '\n') advance();
            } else if (src_.substr(pos_, 2) == "/*") {
                const Mark start = mark();
                advance(2);
                while (pos_ < src_.size() && src_.substr(pos_, 2) != "*/") advance();
                if (pos_ >= src_.size()) {
                    if (options_.lenient) return false;
                    throw LexError(span_from(start), "unterminated comment");
                }
                advance(2);
            } else {
                return true;
            }
        }
        return false;
    }

    struct Mark {
        std::size_t pos;
        std::uint32_t line;
        std::uint32_t col;
    };

    Mark mark() const { return {pos_, line_, col_}; }

    void advance(std::size_t n = 1) {
        for (std::size_t i = 0; i < n && pos_ < src_.size(); ++i) {
            if (src_[pos_] == '\n') {
                ++line_;
                col_ = 1;
            } else {
                ++col_;
            }
            ++pos_;
        }
    }

    SourceSpan span_from(const Mark& m) const {
        return SourceSpan{std::string(file_id_), m.line, m.col, line_, col_, m.pos, pos_};
    }

    bool at_line_start() const {
        for (std::size_t i = pos_; i > 0; --i) {
            const char c = src_[i - 1];
            if (c == '\n') return true;
            if (c != ' ' && c != '\t') return false;
        }
        return true;
    }

    void push(TokenKind kind, const Mark& m, std::uint64_t value = 0) {
        tokens_.push_back(Token{kind, std::string(src_.substr(m.pos, pos_ - m.pos)), span_from(m), value});
    }

    void fail_or_skip(const std::string& message) {
        const Mark m = mark();
        advance();
        if (!options_.lenient) throw LexError(span_from(m), message);
    }

    void lex_directive() {
        const Mark m = mark();
        advance();
        while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t')) advance();
        while (pos_ < src_.size() && is_ident_char(src_[pos_])) advance();
        const std::string_view word = src_.substr(m.pos, pos_ - m.pos);
        if (word.ends_with("include")) {
            // The whole line is one token, minus trailing comment and blanks.
            std::size_t end = pos_;
            while (end < src_.size() && src_[end] != '\n' && src_.substr(end, 2) != "//" &&
                   src_.substr(end, 2) != "/*") {
                ++end;
            }
            while (end > pos_ && std::isspace(static_cast<unsigned char>(src_[end - 1]))) --end;
            advance(end - pos_);
        }
        push(TokenKind::Directive, m);
    }

    void lex_word() {
        const Mark m = mark();
        while (pos_ < src_.size() && is_ident_char(src_[pos_])) advance();
        push(is_keyword(src_.substr(m.pos, pos_ - m.pos)) ? TokenKind::Keyword : TokenKind::Ident, m);
    }

    void lex_number() {
        const Mark m = mark();
        std::uint64_t value = 0;
        bool ok = true;
        std::string problem;
        auto accumulate = [&](unsigned base, unsigned digit) {
            if (value > (UINT64_MAX - digit) / base) {
                ok = false;
                problem = "integer literal does not fit in 64 bits";
            }
            value = value * base + digit;
        };
        if (src_[pos_] == '0' && pos_ + 1 < src_.size() && (src_[pos_ + 1] == 'x' || src_[pos_ + 1] == 'X')) {
            advance(2);
            std::size_t digits = 0;
            while (pos_ < src_.size() && std::isxdigit(static_cast<unsigned char>(src_[pos_]))) {
                const char c = static_cast<char>(std::tolower(static_cast<unsigned char>(src_[pos_])));
                accumulate(16, c <= '9' ? static_cast<unsigned>(c - '0') : static_cast<unsigned>(c - 'a' + 10));
                advance();
                ++digits;
            }
            if (digits == 0) {
                ok = false;
                problem = "hexadecimal literal has no digits";
            }
        } else {
            const bool leading_zero = src_[pos_] == '0';
            std::size_t digits = 0;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                accumulate(10, static_cast<unsigned>(src_[pos_] - '0'));
                advance();
                ++digits;
            }
            if (leading_zero && digits > 1) {
                ok = false;
                problem = "octal literals are not supported";
            }
        }
        std::size_t suffix = 0;
        while (pos_ < src_.size() && suffix < 3 && (src_[pos_] == 'u' || src_[pos_] == 'U' || src_[pos_] == 'l' ||
                                                    src_[pos_] == 'L')) {
            advance();
            ++suffix;
        }
        if (pos_ < src_.size() && (is_ident_char(src_[pos_]) || src_[pos_] == '.')) {
            while (pos_ < src_.size() && (is_ident_char(src_[pos_]) || src_[pos_] == '.')) advance();
            ok = false;
            problem = "malformed numeric literal";
        }
        if (!ok && !options_.lenient) throw LexError(span_from(m), problem);
        push(TokenKind::IntLit, m, ok ? value : 0);
    }

    bool lex_punct() {
        for (std::string_view p : kPunctuators) {
            if (src_.substr(pos_, p.size()) == p) {
                const Mark m = mark();
                advance(p.size());
                push(TokenKind::Punct, m);
                return true;
            }
        }
        return false;
    }

    std::string_view src_;
    std::string_view file_id_;
    LexOptions options_;
    std::size_t pos_ = 0;
    std::uint32_t line_ = 1;
    std::uint32_t col_ = 1;
    std::vector<Token> tokens_;
};

}  // namespace

bool is_keyword(std::string_view word) noexcept {
    for (std::string_view k : kKeywords) {
        if (k == word) return true;
    }
    return false;
}

std::vector<Token> lex(std::string_view source, std::string_view file_id, LexOptions options) {
    return Lexer(source, file_id, options).run();
}

std::vector<std::string> normalize_tokens(std::string_view source) {
    std::vector<std::string> out;
    for (const Token& t : lex(source, "<normalize>")) {
        switch (t.kind) {
            case TokenKind::Ident: out.emplace_back("ID"); break;
            case TokenKind::IntLit: out.emplace_back("LIT"); break;
            default: out.push_back(t.text); break;
        }
    }
    return out;
}

}  // namespace halgen
