/*
 * Copyright (c) 2026 halgen contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */
#include "halgen/analysis/project.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "halgen/c_ast/parser.hpp"
#include "halgen/error.hpp"

namespace fs = std::filesystem;

namespace halgen {

std::size_t Project::hal_unit_index() const {
    for (std::size_t i = 0; i < units.size(); ++i) {
        if (units[i].file_id == hal_unit_id) return i;
    }
    throw ConfigError("hal_unit", "no unit named '" + hal_unit_id + "' in the project");
}

const ast::TranslationUnit& Project::hal_unit() const { return units[hal_unit_index()]; }

ast::TranslationUnit& Project::hal_unit() { return units[hal_unit_index()]; }

void Project::validate() const {
    std::set<std::string> ids;
    for (const auto& u : units) {
        if (!ids.insert(u.file_id).second) throw ConfigError("units", "duplicate file id '" + u.file_id + "'");
    }
    (void)hal_unit_index();
}

Project make_project(const std::vector<std::pair<std::string, std::string>>& sources, std::string hal_unit_id) {
    Project p;
    p.hal_unit_id = std::move(hal_unit_id);
    for (const auto& [id, text] : sources) p.units.push_back(parse(text, id));
    p.validate();
    return p;
}

std::vector<std::pair<std::string, std::string>> read_sources_dir(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir.string());
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        const auto ext = entry.path().extension();
        if (entry.is_regular_file() && (ext == ".c" || ext == ".h")) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    std::vector<std::pair<std::string, std::string>> sources;
    for (const auto& f : files) {
        std::ifstream in(f, std::ios::binary);
        if (!in) throw IoError("cannot read " + f.string());
        std::ostringstream ss;
        ss << in.rdbuf();
        sources.emplace_back(f.filename().string(), ss.str());
    }
    return sources;
}

Project load_project_dir(const fs::path& dir, std::string hal_unit_id) {
    return make_project(read_sources_dir(dir), std::move(hal_unit_id));
}

void write_project_dir(const Project& project, const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
    for (const auto& u : project.units) {
        std::ofstream out(dir / u.file_id, std::ios::binary);
        out << u.source;
        if (!out) throw IoError("cannot write " + (dir / u.file_id).string());
    }
}

}  // namespace halgen
