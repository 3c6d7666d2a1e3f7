/*
 * Copyright (c) 2026 halgen contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>

namespace halgen {

/// Unit-cost insert/delete/substitute distance.
std::size_t levenshtein(std::span<const std::string> a, std::span<const std::string> b);

/// 1 - levenshtein / max(len) over normalized token classes; 1.0 when both
/// inputs are empty. Propagates LexError.
double token_similarity(std::string_view a, std::string_view b);

}  // namespace halgen
