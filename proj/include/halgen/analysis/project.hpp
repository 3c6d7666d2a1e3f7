/*
 * Copyright (c) 2026 halgen contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "halgen/c_ast/ast.hpp"

namespace halgen {

/// An application plus the HAL unit that receives generated code.
/// Unit order defines "file order" for deterministic reporting.
struct Project {
    std::vector<ast::TranslationUnit> units;
    std::string hal_unit_id;

    const ast::TranslationUnit& hal_unit() const;
    ast::TranslationUnit& hal_unit();
    std::size_t hal_unit_index() const;

    /// Checks unique file ids and that `hal_unit_id` names a unit.
    void validate() const;
};

/// Parses each (file_id, text) pair in the given order.
Project make_project(const std::vector<std::pair<std::string, std::string>>& sources, std::string hal_unit_id);

/// (file name, text) of every `.c`/`.h` file of `dir`, sorted by name.
std::vector<std::pair<std::string, std::string>> read_sources_dir(const std::filesystem::path& dir);

/// Loads every `.c`/`.h` file of `dir` (non-recursive, sorted by name).
Project load_project_dir(const std::filesystem::path& dir, std::string hal_unit_id = "hal.c");

/// Writes each unit's source text into `dir` under its file id.
void write_project_dir(const Project& project, const std::filesystem::path& dir);

}  // namespace halgen
