/*
 * Copyright (c) 2026 halgen contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

namespace halgen {

inline constexpr std::size_t kEmbeddingDimension = 256;

/// Fixed-length vector with unit L2 norm, or all zeros for empty input.
struct EmbeddingVector {
    std::vector<double> values;

    std::size_t dimension() const noexcept { return values.size(); }
    bool is_zero() const noexcept;
    bool operator==(const EmbeddingVector&) const = default;
};

/// Cosine similarity; 0 when either side is the zero vector.
double cosine(const EmbeddingVector& a, const EmbeddingVector& b);

std::uint64_t fnv1a64(std::string_view bytes) noexcept;

class Embedder {
public:
    virtual ~Embedder() = default;
    virtual std::size_t dimension() const = 0;
    virtual EmbeddingVector embed(std::string_view text) const = 0;
};

/// Token unigram + bigram counts hashed into buckets, then L2-normalized.
///
/// Tokens come from lenient C-subset lexing: identifiers and keywords keep
/// their text, integer literals collapse to "LIT". A bigram feature is the
/// two token texts joined by a single space. Each feature adds 1 to bucket
/// `fnv1a64(feature) % dimension`.
class HashedNgramEmbedder final : public Embedder {
public:
    explicit HashedNgramEmbedder(std::size_t dimension = kEmbeddingDimension) : dimension_(dimension) {}

    std::size_t dimension() const override { return dimension_; }
    EmbeddingVector embed(std::string_view text) const override;

private:
    std::size_t dimension_;
};

/// Shorthand for HashedNgramEmbedder{}.embed(text).
EmbeddingVector embed(std::string_view text);

}  // namespace halgen
