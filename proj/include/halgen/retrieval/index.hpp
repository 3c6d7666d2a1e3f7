/*
 * Copyright (c) 2026 halgen contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <cstdint>
#include <filesystem>
#include <utility>
#include <vector>

#include "halgen/retrieval/embedding.hpp"

namespace halgen {

inline constexpr std::uint32_t kIndexFormatVersion = 1;

struct IndexEntry {
    std::uint32_t snippet_id = 0;
    EmbeddingVector vector;

    bool operator==(const IndexEntry&) const = default;
};

/// Exact (exhaustive) cosine-similarity index.
struct VectorIndex {
    std::vector<IndexEntry> entries;
    std::uint32_t dimension = static_cast<std::uint32_t>(kEmbeddingDimension);
    std::uint32_t version = kIndexFormatVersion;

    bool operator==(const VectorIndex&) const = default;
};

struct SearchHit {
    std::uint32_t snippet_id;
    double score;
};

/// Top min(k, size) entries by cosine, descending, ties by ascending id.
/// Throws EmptyIndex; k must be at least 1.
std::vector<SearchHit> search(const VectorIndex& index, const EmbeddingVector& query, std::size_t k);

/// Binary layout (little-endian): "HGVI", u32 version, u32 dimension, u32 count,
/// then per entry u32 snippet_id followed by dimension x f64.
void save_index(const VectorIndex& index, const std::filesystem::path& path);

/// Throws FormatError on bad magic, version or truncation; IoError if unreadable.
VectorIndex load_index(const std::filesystem::path& path);

}  // namespace halgen
