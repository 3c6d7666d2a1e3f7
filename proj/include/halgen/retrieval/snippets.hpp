/*
 * Copyright (c) 2026 halgen contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "halgen/analysis/project.hpp"
#include "halgen/retrieval/embedding.hpp"
#include "halgen/retrieval/index.hpp"

namespace halgen {

enum class SnippetKind { Function, ConstantGroup, Doc };

std::string_view to_string(SnippetKind kind);

struct Snippet {
    std::uint32_t id = 0;
    SnippetKind kind = SnippetKind::Function;
    std::string name;
    std::string text;
    SourceSpan origin;

    bool operator==(const Snippet&) const;
};

/// One snippet per function and one per maximal run of adjacent
/// constants/globals, in source order. Ids are dense from 0.
std::vector<Snippet> chunk_codebase(const Project& project);

VectorIndex build_index(const std::vector<Snippet>& snippets, const Embedder& embedder);

/// Sidecar text format: a "HGSS 1" header line, then per record a line
/// `id<TAB>kind<TAB>name<TAB>file_id<TAB>sl:sc-el:ec<TAB>length` followed by
/// exactly `length` bytes of text and a newline.
void save_snippets(const std::vector<Snippet>& snippets, const std::filesystem::path& path);
std::vector<Snippet> load_snippets(const std::filesystem::path& path);

/// Path of the snippet store written next to an index file.
std::filesystem::path snippet_store_path(const std::filesystem::path& index_path);

/// Snippet store + index + embedder: the context source for prompting.
class Retriever {
public:
    Retriever(std::vector<Snippet> snippets, VectorIndex index, std::shared_ptr<const Embedder> embedder);

    static Retriever from_project(const Project& project,
                                  std::shared_ptr<const Embedder> embedder = std::make_shared<HashedNgramEmbedder>());

    /// Up to k snippets most similar to `query`; empty when the index is empty.
    std::vector<Snippet> top_k(std::string_view query, std::size_t k) const;

    const std::vector<Snippet>& snippets() const noexcept { return snippets_; }
    const VectorIndex& index() const noexcept { return index_; }

private:
    std::vector<Snippet> snippets_;
    VectorIndex index_;
    std::shared_ptr<const Embedder> embedder_;
};

}  // namespace halgen
