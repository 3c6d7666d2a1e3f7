/*
 * Copyright (c) 2026 halgen contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */
#include "halgen/retrieval/snippets.hpp"

#include <fstream>
#include <iterator>
#include <sstream>

#include "halgen/c_ast/printer.hpp"
#include "halgen/error.hpp"

namespace halgen {

std::string_view to_string(SnippetKind kind) {
    switch (kind) {
        case SnippetKind::Function: return "Function";
        case SnippetKind::ConstantGroup: return "ConstantGroup";
        case SnippetKind::Doc: return "Doc";
    }
    return "?";
}

bool Snippet::operator==(const Snippet& o) const {
    return id == o.id && kind == o.kind && name == o.name && text == o.text && origin.file_id == o.origin.file_id &&
           origin.start_line == o.origin.start_line && origin.start_col == o.origin.start_col &&
           origin.end_line == o.origin.end_line && origin.end_col == o.origin.end_col;
}

std::vector<Snippet> chunk_codebase(const Project& project) {
    std::vector<Snippet> out;
    auto emit = [&](SnippetKind kind, std::string name, std::string text, SourceSpan origin) {
        out.push_back(Snippet{static_cast<std::uint32_t>(out.size()), kind, std::move(name), std::move(text),
                              std::move(origin)});
    };
    for (const ast::TranslationUnit& unit : project.units) {
        const auto& items = unit.items;
        for (std::size_t i = 0; i < items.size();) {
            if (items[i].as<ast::FunctionDef>()) {
                emit(SnippetKind::Function, items[i].name(), print_item(items[i]), items[i].span);
                ++i;
            } else if (items[i].as<ast::MacroConst>() || items[i].as<ast::GlobalDecl>()) {
                std::size_t j = i;
                std::string name;
                std::string text;
                while (j < items.size() && (items[j].as<ast::MacroConst>() || items[j].as<ast::GlobalDecl>())) {
                    if (!name.empty()) name += ",";
                    name += items[j].name();
                    text += print_item(items[j]);
                    ++j;
                }
                emit(SnippetKind::ConstantGroup, std::move(name), std::move(text),
                     SourceSpan::merge(items[i].span, items[j - 1].span));
                i = j;
            } else {
                ++i;
            }
        }
    }
    return out;
}

VectorIndex build_index(const std::vector<Snippet>& snippets, const Embedder& embedder) {
    VectorIndex index;
    index.dimension = static_cast<std::uint32_t>(embedder.dimension());
    for (const Snippet& s : snippets) index.entries.push_back({s.id, embedder.embed(s.text)});
    return index;
}

namespace {

SnippetKind parse_kind(const std::string& s) {
    if (s == "Function") return SnippetKind::Function;
    if (s == "ConstantGroup") return SnippetKind::ConstantGroup;
    if (s == "Doc") return SnippetKind::Doc;
    throw FormatError("unknown snippet kind '" + s + "'");
}

bool has_separator(const std::string& s) { return s.find_first_of("\t\n") != std::string::npos; }

}  // namespace

void save_snippets(const std::vector<Snippet>& snippets, const std::filesystem::path& path) {
    std::ostringstream out;
    out << "HGSS 1\n";
    for (const Snippet& s : snippets) {
        if (has_separator(s.name) || has_separator(s.origin.file_id)) {
            throw Error("snippet name or origin contains a tab or newline");
        }
        const auto& o = s.origin;
        out << s.id << '\t' << to_string(s.kind) << '\t' << s.name << '\t' << o.file_id << '\t' << o.start_line << ':'
            << o.start_col << '-' << o.end_line << ':' << o.end_col << '\t' << s.text.size() << '\n'
            << s.text << '\n';
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open " + path.string() + " for writing");
    f << out.str();
    if (!f) throw IoError("cannot write " + path.string());
}

std::vector<Snippet> load_snippets(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open " + path.string());
    const std::string bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    if (!bytes.starts_with("HGSS 1\n")) throw FormatError("bad snippet store header");
    std::vector<Snippet> out;
    std::size_t pos = 7;
    while (pos < bytes.size()) {
        const std::size_t eol = bytes.find('\n', pos);
        if (eol == std::string::npos) throw FormatError("truncated snippet record header");
        std::istringstream header(bytes.substr(pos, eol - pos));
        std::vector<std::string> fields;
        for (std::string field; std::getline(header, field, '\t');) fields.push_back(field);
        if (fields.size() != 6) throw FormatError("snippet record header has " + std::to_string(fields.size()) + " fields");
        Snippet s;
        try {
            s.id = static_cast<std::uint32_t>(std::stoul(fields[0]));
            s.kind = parse_kind(fields[1]);
            s.name = fields[2];
            s.origin.file_id = fields[3];
            char colon1, dash, colon2;
            std::istringstream span(fields[4]);
            span >> s.origin.start_line >> colon1 >> s.origin.start_col >> dash >> s.origin.end_line >> colon2 >>
                s.origin.end_col;
            if (!span || colon1 != ':' || dash != '-' || colon2 != ':') throw FormatError("bad snippet span");
            const std::size_t length = std::stoul(fields[5]);
            if (bytes.size() - (eol + 1) < length + 1) throw FormatError("truncated snippet text");
            s.text = bytes.substr(eol + 1, length);
            pos = eol + 1 + length;
            if (bytes[pos] != '\n') throw FormatError("snippet text not newline-terminated");
            ++pos;
        } catch (const std::logic_error&) {
            throw FormatError("malformed number in snippet record");
        }
        if (s.id != out.size()) throw FormatError("snippet ids are not dense");
        out.push_back(std::move(s));
    }
    return out;
}

std::filesystem::path snippet_store_path(const std::filesystem::path& index_path) {
    std::filesystem::path p = index_path;
    p += ".snippets";
    return p;
}

Retriever::Retriever(std::vector<Snippet> snippets, VectorIndex index, std::shared_ptr<const Embedder> embedder)
    : snippets_(std::move(snippets)), index_(std::move(index)), embedder_(std::move(embedder)) {
    for (const IndexEntry& e : index_.entries) {
        if (e.snippet_id >= snippets_.size()) throw FormatError("index refers to unknown snippet " + std::to_string(e.snippet_id));
    }
}

Retriever Retriever::from_project(const Project& project, std::shared_ptr<const Embedder> embedder) {
    auto snippets = chunk_codebase(project);
    auto index = build_index(snippets, *embedder);
    return Retriever(std::move(snippets), std::move(index), std::move(embedder));
}

std::vector<Snippet> Retriever::top_k(std::string_view query, std::size_t k) const {
    if (index_.entries.empty()) return {};
    std::vector<Snippet> out;
    for (const SearchHit& hit : search(index_, embedder_->embed(query), k)) out.push_back(snippets_[hit.snippet_id]);
    return out;
}

}  // namespace halgen
