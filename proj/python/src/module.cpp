/*
 * Copyright (c) 2026 halgen contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "halgen/analysis/project.hpp"
#include "halgen/analysis/similarity.hpp"
#include "halgen/analysis/symbols.hpp"
#include "halgen/c_ast/lexer.hpp"
#include "halgen/c_ast/parser.hpp"
#include "halgen/c_ast/printer.hpp"
#include "halgen/cli/commands.hpp"
#include "halgen/cli/config.hpp"
#include "halgen/completion/completion.hpp"
#include "halgen/error.hpp"
#include "halgen/generation/kb_backend.hpp"
#include "halgen/retrieval/embedding.hpp"
#include "halgen/retrieval/snippets.hpp"
#include "halgen/simulate/interpreter.hpp"

namespace py = pybind11;
using namespace halgen;

namespace {

py::list analyze(const std::string& dir, const std::string& hal_unit) {
    const auto missing = detect_missing(build_symbol_table(load_project_dir(dir, hal_unit)));
    py::list out;
    for (const auto& m : missing) {
        py::dict d;
        d["name"] = m.name;
        d["kind"] = std::string(to_string(m.kind));
        d["arity"] = m.arity;
        d["sample_args"] = m.sample_args;
        d["location"] = m.first_ref_span.location();
        out.append(d);
    }
    return out;
}

std::string complete_dir(const std::string& dir, const std::string& out_dir, const std::string& kb_dir,
                         const std::string& hal_unit) {
    Project project = load_project_dir(dir, hal_unit);
    KbBackend backend(load_knowledge_base(kb_dir.empty() ? default_config().kb_path : std::filesystem::path(kb_dir)));
    const Retriever retriever = Retriever::from_project(project);
    CompletionOutcome outcome;
    {
        py::gil_scoped_release release;
        outcome = complete(std::move(project), backend, retriever);
    }
    if (!out_dir.empty()) write_project_dir(outcome.project, out_dir);
    return report_to_json(outcome.report);
}

std::string simulate_dir(const std::string& dir, const std::string& scenario, bool strict, const std::string& hal_unit) {
    const Project project = load_project_dir(dir, hal_unit);
    const Scenario s = load_scenario(scenario);
    py::gil_scoped_release release;
    return verdict_to_json(exec_program(project, default_board_map(), s, ExecOptions{strict}).verdict);
}

py::tuple cli(const std::vector<std::string>& args) {
    std::vector<std::string> full{"halgen"};
    full.insert(full.end(), args.begin(), args.end());
    std::ostringstream out, err;
    const int code = run_cli(full, out, err);
    return py::make_tuple(code, out.str(), err.str());
}

}  // namespace

PYBIND11_MODULE(_halgen, m) {
    m.doc() = "C-subset HAL analysis, completion and simulation";

    auto& base = py::register_exception<Error>(m, "HalgenError");
    py::register_exception<SourceError>(m, "SourceError", base.ptr());
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
    py::register_exception<SimSetupError>(m, "SimSetupError", base.ptr());
    py::register_exception<IoError>(m, "IoError", base.ptr());

    m.def(
        "pretty_print", [](const std::string& source) { return pretty_print(parse(source, "<input>")); },
        py::arg("source"), "Parse C-subset source and print it canonically.");
    m.def("normalize_tokens", &normalize_tokens, py::arg("source"));
    m.def("token_similarity", &token_similarity, py::arg("a"), py::arg("b"));
    m.def(
        "embed", [](const std::string& text) { return embed(text).values; }, py::arg("text"));
    m.def("analyze", &analyze, py::arg("project_dir"), py::arg("hal_unit") = "hal.c");
    m.def("_complete_json", &complete_dir, py::arg("project_dir"), py::arg("out_dir") = "", py::arg("kb_dir") = "",
          py::arg("hal_unit") = "hal.c");
    m.def("_simulate_json", &simulate_dir, py::arg("project_dir"), py::arg("scenario_path"), py::arg("strict") = true,
          py::arg("hal_unit") = "hal.c");
    m.def("run_cli", &cli, py::arg("args"), "Run the command-line interface in-process; returns (code, stdout, stderr).");
}
