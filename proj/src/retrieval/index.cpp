/*
 * Copyright (c) 2026 halgen contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */
#include "halgen/retrieval/index.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "halgen/error.hpp"

namespace halgen {

std::vector<SearchHit> search(const VectorIndex& index, const EmbeddingVector& query, std::size_t k) {
    if (index.entries.empty()) throw EmptyIndex();
    if (k == 0) throw Error("search: k must be at least 1");
    std::vector<SearchHit> hits;
    hits.reserve(index.entries.size());
    for (const IndexEntry& e : index.entries) hits.push_back({e.snippet_id, cosine(e.vector, query)});
    const auto better = [](const SearchHit& a, const SearchHit& b) {
        return a.score != b.score ? a.score > b.score : a.snippet_id < b.snippet_id;
    };
    const std::size_t n = std::min(k, hits.size());
    std::partial_sort(hits.begin(), hits.begin() + static_cast<std::ptrdiff_t>(n), hits.end(), better);
    hits.resize(n);
    return hits;
}

namespace {

constexpr char kMagic[4] = {'H', 'G', 'V', 'I'};

void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_u64(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

class Reader {
public:
    Reader(const std::string& bytes, std::size_t start) : bytes_(bytes), pos_(start) {}

    std::uint32_t u32() { return static_cast<std::uint32_t>(read(4)); }
    std::uint64_t u64() { return read(8); }
    bool done() const { return pos_ == bytes_.size(); }

private:
    std::uint64_t read(std::size_t n) {
        if (bytes_.size() - pos_ < n) throw FormatError("index file is truncated");
        std::uint64_t v = 0;
        for (std::size_t i = 0; i < n; ++i) {
            v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
        }
        pos_ += n;
        return v;
    }

    const std::string& bytes_;
    std::size_t pos_;
};

}  // namespace

void save_index(const VectorIndex& index, const std::filesystem::path& path) {
    std::string out(kMagic, 4);
    put_u32(out, index.version);
    put_u32(out, index.dimension);
    put_u32(out, static_cast<std::uint32_t>(index.entries.size()));
    for (const IndexEntry& e : index.entries) {
        if (e.vector.dimension() != index.dimension) throw Error("index entry dimension mismatch");
        put_u32(out, e.snippet_id);
        for (double x : e.vector.values) put_u64(out, std::bit_cast<std::uint64_t>(x));
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open " + path.string() + " for writing");
    f.write(out.data(), static_cast<std::streamsize>(out.size()));
    if (!f) throw IoError("cannot write " + path.string());
}

VectorIndex load_index(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open " + path.string());
    const std::string bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0) throw FormatError("bad index magic");
    Reader r(bytes, 4);
    VectorIndex index;
    index.version = r.u32();
    if (index.version != kIndexFormatVersion) {
        throw FormatError("unsupported index version " + std::to_string(index.version));
    }
    index.dimension = r.u32();
    const std::uint32_t count = r.u32();
    if (index.dimension == 0 || (count > 0 && std::uint64_t{index.dimension} * 8 > bytes.size())) {
        throw FormatError("implausible index dimension " + std::to_string(index.dimension));
    }
    for (std::uint32_t i = 0; i < count; ++i) {
        IndexEntry e;
        e.snippet_id = r.u32();
        e.vector.values.resize(index.dimension);
        for (double& x : e.vector.values) x = std::bit_cast<double>(r.u64());
        index.entries.push_back(std::move(e));
    }
    if (!r.done()) throw FormatError("trailing bytes after index entries");
    return index;
}

}  // namespace halgen
