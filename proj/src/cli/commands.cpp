/*
 * Copyright (c) 2026 halgen contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */
#include "halgen/cli/commands.hpp"

#include <climits>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>

#include <CLI11.hpp>

#include "halgen/analysis/symbols.hpp"
#include "halgen/c_ast/parser.hpp"
#include "halgen/cli/config.hpp"
#include "halgen/cli/experiment.hpp"
#include "halgen/error.hpp"
#include "halgen/generation/http_backend.hpp"
#include "halgen/generation/kb_backend.hpp"
#include "halgen/retrieval/index.hpp"
#include "halgen/simulate/compile_check.hpp"

namespace fs = std::filesystem;

namespace halgen {
namespace {

struct Options {
    std::string config_path;
    std::string backend;
    std::optional<std::uint64_t> seed;
    bool strict = false;
    int iterations = 100;
    std::string compile_cmd;
    std::string out;
    std::string index;
};

void write_text(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(path.parent_path(), ec);
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open " + path.string() + " for writing");
    f << text;
    if (!f) throw IoError("cannot write " + path.string());
}

std::string escape(std::string_view s) {
    std::string out;
    for (const char c : s) {
        switch (c) {
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            case '\\': out += "\\\\"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20 || static_cast<unsigned char>(c) >= 0x7F) {
                    char buf[5];
                    std::snprintf(buf, sizeof buf, "\\x%02X", static_cast<unsigned char>(c));
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    return out;
}

Config resolve_config(const Options& opts) {
    Config cfg = opts.config_path.empty() ? default_config() : load_config(opts.config_path);
    if (!opts.backend.empty()) cfg.backend = opts.backend;
    if (opts.seed) cfg.seed = *opts.seed;
    if (opts.strict) cfg.strict_vetting = true;
    return cfg;
}

CompletionOptions completion_options(const Config& cfg) {
    CompletionOptions o;
    o.limits = cfg.limits;
    o.retry.max_retries = cfg.http.max_retries;
    o.retry.backoff = cfg.retry_backoff;
    o.top_k = cfg.retrieval_k;
    if (cfg.template_path) o.prompt_template = load_template(*cfg.template_path);
    o.model = cfg.http.model;
    o.strict_vetting = cfg.strict_vetting;
    return o;
}

std::function<std::shared_ptr<Backend>()> backend_factory(const Config& cfg) {
    if (cfg.backend == "http") {
        HttpBackend probe(cfg.http);  // validates the endpoint up front
        return [http = cfg.http] { return std::make_shared<HttpBackend>(http); };
    }
    auto kb = std::make_shared<const KnowledgeBase>(load_knowledge_base(cfg.kb_path));
    return [kb] { return std::make_shared<KbBackend>(*kb); };
}

BoardMap board_for(const Config& cfg) {
    return cfg.board_map_path ? load_board_map(*cfg.board_map_path) : default_board_map();
}

int cmd_analyze(const std::string& dir, const Options& opts, std::ostream& out) {
    const Config cfg = resolve_config(opts);
    const Project project = load_project_dir(dir, cfg.hal_unit);
    const auto missing = detect_missing(build_symbol_table(project));
    for (const auto& m : missing) {
        out << m.name << ' ' << to_string(m.kind) << " arity=" << m.arity << ' ' << m.first_ref_span.location() << '\n';
    }
    return missing.empty() ? kExitOk : kExitGaps;
}

int cmd_index(const std::string& dir, const std::string& index_path, std::ostream& out) {
    Project project;
    for (const auto& [id, text] : read_sources_dir(dir)) project.units.push_back(parse(text, id));
    const auto snippets = chunk_codebase(project);
    const HashedNgramEmbedder embedder;
    save_index(build_index(snippets, embedder), index_path);
    save_snippets(snippets, snippet_store_path(index_path));
    out << "indexed " << snippets.size() << " snippets\n";
    return kExitOk;
}

int cmd_complete(const std::string& dir, const std::string& out_dir, const Options& opts, std::ostream& out) {
    const Config cfg = resolve_config(opts);
    Project project = load_project_dir(dir, cfg.hal_unit);
    const auto options = completion_options(cfg);
    const auto backend = backend_factory(cfg)();
    auto embedder = std::make_shared<const HashedNgramEmbedder>();
    const Retriever retriever = opts.index.empty()
                                    ? Retriever::from_project(project, embedder)
                                    : Retriever(load_snippets(snippet_store_path(opts.index)), load_index(opts.index), embedder);
    CompletionOutcome outcome = complete(std::move(project), *backend, retriever, options);
    write_project_dir(outcome.project, out_dir);
    const fs::path report_path = opts.out.empty() ? fs::path(out_dir) / "completion_report.json" : fs::path(opts.out);
    write_text(report_path, report_to_json(outcome.report) + "\n");
    const auto& r = outcome.report;
    out << to_string(r.status) << ": inserted " << r.inserted.size() << " elements, " << r.total_calls << " calls, "
        << r.iterations_used << " iterations\n";
    for (const auto& f : r.failures) {
        out << "failed " << f.name << ':';
        for (const auto& reason : f.reasons) out << ' ' << reason;
        out << '\n';
    }
    if (!r.message.empty() && !r.closed) out << r.message << '\n';
    return r.closed ? kExitOk : kExitNotCompleted;
}

int cmd_simulate(const std::string& dir, const std::string& scenario_path, const Options& opts, std::ostream& out) {
    const Config cfg = resolve_config(opts);
    const Project project = load_project_dir(dir, cfg.hal_unit);
    const Scenario scenario = load_scenario(scenario_path);
    ExecResult result = exec_program(project, board_for(cfg), scenario, ExecOptions{cfg.strict_gating});
    if (!opts.compile_cmd.empty()) result.verdict.compile_status = run_compile_check(project, opts.compile_cmd);
    const Verdict& v = result.verdict;
    write_text(opts.out.empty() ? fs::path("verdict.json") : fs::path(opts.out), verdict_to_json(v) + "\n");
    out << (v.passed ? "PASSED" : "FAILED") << " (" << v.steps_used << " steps)\n";
    out << "usart log: \"" << escape(v.usart_log) << "\"\n";
    if (!v.log_match) out << "expected:  \"" << escape(v.expected_log) << "\"\n";
    for (const auto& m : v.register_matches) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "register 0x%08X expected 0x%08X actual 0x%08X %s\n", m.address, m.expected,
                      m.actual, m.ok ? "ok" : "MISMATCH");
        out << buf;
    }
    for (const auto& d : v.diagnostics) {
        out << to_string(d.severity) << ": " << (d.location.empty() ? "" : d.location + ": ") << d.message << '\n';
    }
    if (v.compile_status) out << "compile command exited with " << v.compile_status->exit_code << '\n';
    return v.passed ? kExitOk : kExitVerdictFailed;
}

int cmd_experiment(const std::string& kind_text, const Options& opts, std::ostream& out) {
    const Config cfg = resolve_config(opts);
    const ExperimentKind kind = parse_experiment_kind(kind_text);
    ExperimentSetup setup;
    setup.pristine = load_project_dir(cfg.fixture_dir, cfg.hal_unit);
    setup.scenario = load_scenario(cfg.effective_scenario_path());
    setup.board = board_for(cfg);
    setup.make_backend = backend_factory(cfg);
    setup.embedder = std::make_shared<const HashedNgramEmbedder>();
    setup.completion = completion_options(cfg);
    setup.exec.strict = cfg.strict_gating;
    const ExperimentReport report = run_experiment(kind, opts.iterations, cfg.seed, setup);
    write_text(opts.out.empty() ? fs::path("experiment_report.json") : fs::path(opts.out),
               experiment_to_json(report) + "\n");
    char rate[32];
    std::snprintf(rate, sizeof rate, "%.3f", report.pass_rate);
    out << to_string(kind) << ": " << report.passes << '/' << report.iterations << " passed (pass_rate " << rate
        << "), " << report.total_generation_calls << " generation calls\n";
    return report.passes == report.iterations ? kExitOk : kExitVerdictFailed;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Generate missing HAL code for embedded C projects and check it in a simulator", "halgen"};
    app.fallthrough();
    app.require_subcommand(1);
    Options opts;
    app.add_option("--config", opts.config_path, "Configuration file (JSON)");
    app.add_option("--backend", opts.backend, "Generation backend")->check(CLI::IsMember({"kb", "http"}));
    app.add_option("--seed", opts.seed, "Seed for experiment element choice");
    app.add_flag("--strict", opts.strict, "Reject generated code that references unknown names");
    app.add_option("--iterations", opts.iterations, "Experiment iterations")->check(CLI::Range(1, INT_MAX));
    app.add_option("--compile-cmd", opts.compile_cmd, "External compiler command; {file} is the program");
    app.add_option("--out", opts.out, "Where to write the JSON report");
    app.add_option("--index", opts.index, "Prebuilt index for complete");

    std::string dir, second, kind;
    auto* analyze = app.add_subcommand("analyze", "List missing elements");
    analyze->add_option("project_dir", dir)->required();
    auto* index = app.add_subcommand("index", "Build the retrieval index");
    index->add_option("project_dir", dir)->required();
    index->add_option("index_path", second)->required();
    auto* completecmd = app.add_subcommand("complete", "Generate missing elements until the project is closed");
    completecmd->add_option("project_dir", dir)->required();
    completecmd->add_option("out_dir", second)->required();
    auto* simulate = app.add_subcommand("simulate", "Run a project against a scenario");
    simulate->add_option("project_dir", dir)->required();
    simulate->add_option("scenario", second)->required();
    auto* experiment = app.add_subcommand("experiment", "Deletion and regeneration experiment");
    experiment->add_option("kind", kind, "random_deletion or full_hal")->required();

    std::vector<std::string> rev(args.rbegin(), args.rend());
    if (!rev.empty()) rev.pop_back();  // program name
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (analyze->parsed()) return cmd_analyze(dir, opts, out);
        if (index->parsed()) return cmd_index(dir, second, out);
        if (completecmd->parsed()) return cmd_complete(dir, second, opts, out);
        if (simulate->parsed()) return cmd_simulate(dir, second, opts, out);
        if (experiment->parsed()) return cmd_experiment(kind, opts, out);
    } catch (const ConfigError& e) {
        err << "configuration error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const TemplateError& e) {
        err << "template error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const SimSetupError& e) {
        err << "simulation setup error: " << e.what() << '\n';
        return kExitSimSetup;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitError;
    }
    return kExitUsage;
}

}  // namespace halgen
