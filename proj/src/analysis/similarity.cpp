/*
 * Copyright (c) 2026 halgen contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */
#include "halgen/analysis/similarity.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

#include "halgen/c_ast/lexer.hpp"

namespace halgen {

std::size_t levenshtein(std::span<const std::string> a, std::span<const std::string> b) {
    if (a.size() < b.size()) std::swap(a, b);
    // Two rows over the shorter sequence.
    std::vector<std::size_t> prev(b.size() + 1);
    std::vector<std::size_t> cur(b.size() + 1);
    std::iota(prev.begin(), prev.end(), std::size_t{0});
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

double token_similarity(std::string_view a, std::string_view b) {
    const auto ta = normalize_tokens(a);
    const auto tb = normalize_tokens(b);
    const std::size_t longest = std::max(ta.size(), tb.size());
    if (longest == 0) return 1.0;
    return 1.0 - static_cast<double>(levenshtein(ta, tb)) / static_cast<double>(longest);
}

}  // namespace halgen
