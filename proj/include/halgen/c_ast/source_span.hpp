/*
 * Copyright (c) 2026 halgen contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

namespace halgen {

/// Region of a source file. Lines and columns are 1-based; `end_col` and
/// `end_offset` point one past the last character.
struct SourceSpan {
    std::string file_id;
    std::uint32_t start_line = 1;
    std::uint32_t start_col = 1;
    std::uint32_t end_line = 1;
    std::uint32_t end_col = 1;
    std::size_t begin_offset = 0;
    std::size_t end_offset = 0;

    std::string location() const {
        return file_id + ":" + std::to_string(start_line) + ":" + std::to_string(start_col);
    }

    /// Smallest span covering both `a` and `b` (same file assumed).
    static SourceSpan merge(const SourceSpan& a, const SourceSpan& b) {
        SourceSpan out = a;
        out.end_line = b.end_line;
        out.end_col = b.end_col;
        out.end_offset = b.end_offset;
        return out;
    }
};

}  // namespace halgen
