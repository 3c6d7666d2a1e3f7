/*
 * Copyright (c) 2026 halgen contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */
#include "halgen/simulate/compile_check.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "halgen/error.hpp"

namespace halgen {

std::string concatenate_units(const Project& project) {
    std::string out;
    const std::size_t hal = project.hal_unit_index();
    auto append = [&](const ast::TranslationUnit& unit) {
        out += "/* " + unit.file_id + " */\n";
        out += unit.source;
        if (!unit.source.empty() && unit.source.back() != '\n') out += '\n';
        out += '\n';
    };
    append(project.units[hal]);
    for (std::size_t i = 0; i < project.units.size(); ++i) {
        if (i != hal) append(project.units[i]);
    }
    return out;
}

CompileStatus run_compile_check(const Project& project, std::string_view command_template) {
    namespace fs = std::filesystem;
    std::string pattern = (fs::temp_directory_path() / "halgen-XXXXXX.c").string();
    const int fd = ::mkstemps(pattern.data(), 2);
    if (fd < 0) throw IoError("cannot create a temporary file for the compile check");
    ::close(fd);
    const fs::path file = pattern;
    {
        std::ofstream f(file, std::ios::binary | std::ios::trunc);
        f << concatenate_units(project);
        if (!f) throw IoError("cannot write " + file.string());
    }

    std::string command(command_template);
    const std::string quoted = "'" + file.string() + "'";
    if (const auto pos = command.find("{file}"); pos != std::string::npos) {
        command.replace(pos, 6, quoted);
    } else {
        command += " " + quoted;
    }

    CompileStatus status;
    status.command = command;
    FILE* pipe = ::popen((command + " 2>&1").c_str(), "r");
    if (!pipe) {
        fs::remove(file);
        throw IoError("cannot run compile command: " + command);
    }
    std::array<char, 4096> buf{};
    while (const std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe)) status.output.append(buf.data(), n);
    const int raw = ::pclose(pipe);
    status.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : 128 + (WIFSIGNALED(raw) ? WTERMSIG(raw) : 0);
    std::error_code ec;
    fs::remove(file, ec);
    return status;
}

}  // namespace halgen
