/*
 * Copyright (c) 2026 halgen contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */
#include "halgen/retrieval/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "halgen/c_ast/lexer.hpp"

namespace halgen {

bool EmbeddingVector::is_zero() const noexcept {
    return std::all_of(values.begin(), values.end(), [](double v) { return v == 0.0; });
}

double cosine(const EmbeddingVector& a, const EmbeddingVector& b) {
    const std::size_t n = std::min(a.values.size(), b.values.size());
    double dot = 0.0;
    double na = 0.0;
    double nb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        dot += a.values[i] * b.values[i];
        na += a.values[i] * a.values[i];
        nb += b.values[i] * b.values[i];
    }
    if (na == 0.0 || nb == 0.0) return 0.0;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

EmbeddingVector HashedNgramEmbedder::embed(std::string_view text) const {
    std::vector<std::string> tokens;
    for (const Token& t : lex(text, "<embed>", LexOptions{.lenient = true})) {
        tokens.push_back(t.kind == TokenKind::IntLit ? std::string("LIT") : t.text);
    }
    EmbeddingVector v{std::vector<double>(dimension_, 0.0)};
    if (tokens.empty()) return v;
    auto bump = [&](std::string_view feature) { v.values[fnv1a64(feature) % dimension_] += 1.0; };
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        bump(tokens[i]);
        if (i + 1 < tokens.size()) bump(tokens[i] + " " + tokens[i + 1]);
    }
    double norm = 0.0;
    for (double x : v.values) norm += x * x;
    norm = std::sqrt(norm);
    for (double& x : v.values) x /= norm;
    return v;
}

EmbeddingVector embed(std::string_view text) { return HashedNgramEmbedder{}.embed(text); }

}  // namespace halgen
