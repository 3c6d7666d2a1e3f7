/*
 * Copyright (c) 2026 halgen contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */
#include "halgen/cli/experiment.hpp"

#include <random>

#include <json.hpp>

#include "halgen/error.hpp"

namespace halgen {

std::string_view to_string(ExperimentKind kind) {
    return kind == ExperimentKind::FullHal ? "full_hal" : "random_deletion";
}

ExperimentKind parse_experiment_kind(std::string_view text) {
    if (text == "random_deletion") return ExperimentKind::RandomDeletion;
    if (text == "full_hal") return ExperimentKind::FullHal;
    throw ConfigError("experiment", "unknown experiment '" + std::string(text) + "'");
}

namespace {

IterationRecord run_iteration(ExperimentKind kind, std::mt19937_64& rng, const ExperimentSetup& setup) {
    IterationRecord rec;
    try {
        Project project = setup.pristine;
        if (kind == ExperimentKind::FullHal) {
            auto [stripped, names] = delete_all_hal(std::move(project));
            project = std::move(stripped);
            rec.deleted = std::move(names);
        } else {
            std::vector<std::string> names;
            for (const auto& item : project.hal_unit().items) {
                if (item.is_definition()) names.push_back(item.name());
            }
            if (names.empty()) throw SimSetupError("the HAL unit has nothing to delete");
            const std::string victim = names[rng() % names.size()];
            project = delete_element(std::move(project), victim);
            rec.deleted = {victim};
        }

        CompletionOptions options = setup.completion;
        options.reference = setup.pristine;
        const auto backend = setup.make_backend();
        const Retriever retriever = Retriever::from_project(project, setup.embedder);
        CompletionOutcome outcome = complete(std::move(project), *backend, retriever, options);
        rec.calls = outcome.report.total_calls;
        rec.closed = outcome.report.closed;
        if (outcome.report.per_element_similarity && !outcome.report.per_element_similarity->empty()) {
            double sum = 0.0;
            for (const auto& [name, sim] : *outcome.report.per_element_similarity) sum += sim;
            rec.mean_similarity = sum / static_cast<double>(outcome.report.per_element_similarity->size());
        }
        if (!rec.closed) {
            rec.error = "completion did not close the project: " + outcome.report.message;
            return rec;
        }
        const ExecResult run = exec_program(outcome.project, setup.board, setup.scenario, setup.exec);
        rec.verdict_passed = run.verdict.passed;
    } catch (const std::exception& e) {
        rec.error = e.what();
    }
    return rec;
}

}  // namespace

ExperimentReport run_experiment(ExperimentKind kind, int iterations, std::uint64_t seed, const ExperimentSetup& setup) {
    if (iterations < 1) throw ConfigError("iterations", "must be at least 1");
    ExperimentReport report;
    report.experiment = kind;
    report.iterations = iterations;
    report.seed = seed;
    std::mt19937_64 rng(seed);
    for (int i = 0; i < iterations; ++i) {
        IterationRecord rec = run_iteration(kind, rng, setup);
        report.total_generation_calls += rec.calls;
        if (rec.closed && rec.verdict_passed) ++report.passes;
        report.per_iteration.push_back(std::move(rec));
    }
    report.pass_rate = static_cast<double>(report.passes) / static_cast<double>(iterations);
    return report;
}

std::string experiment_to_json(const ExperimentReport& report, int indent) {
    nlohmann::ordered_json j;
    j["experiment"] = to_string(report.experiment);
    j["iterations"] = report.iterations;
    j["seed"] = report.seed;
    j["passes"] = report.passes;
    j["pass_rate"] = report.pass_rate;
    j["total_generation_calls"] = report.total_generation_calls;
    j["per_iteration"] = nlohmann::ordered_json::array();
    for (const auto& r : report.per_iteration) {
        nlohmann::ordered_json it;
        it["deleted"] = r.deleted;
        it["calls"] = r.calls;
        it["closed"] = r.closed;
        it["verdict_passed"] = r.verdict_passed;
        it["mean_similarity"] = r.mean_similarity ? nlohmann::ordered_json(*r.mean_similarity) : nullptr;
        if (r.error) it["error"] = *r.error;
        j["per_iteration"].push_back(std::move(it));
    }
    return j.dump(indent, ' ', false, nlohmann::ordered_json::error_handler_t::replace);
}

}  // namespace halgen
