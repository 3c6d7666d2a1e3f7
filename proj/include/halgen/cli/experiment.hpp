/*
 * Copyright (c) 2026 halgen contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "halgen/analysis/project.hpp"
#include "halgen/completion/completion.hpp"
#include "halgen/generation/backend.hpp"
#include "halgen/retrieval/embedding.hpp"
#include "halgen/simulate/interpreter.hpp"

namespace halgen {

enum class ExperimentKind { RandomDeletion, FullHal };

std::string_view to_string(ExperimentKind kind);
/// Throws ConfigError for anything but "random_deletion" or "full_hal".
ExperimentKind parse_experiment_kind(std::string_view text);

struct IterationRecord {
    std::vector<std::string> deleted;
    int calls = 0;
    bool closed = false;
    bool verdict_passed = false;
    std::optional<double> mean_similarity;
    /// Set when the iteration hit an infrastructure failure.
    std::optional<std::string> error;
};

struct ExperimentReport {
    ExperimentKind experiment = ExperimentKind::RandomDeletion;
    int iterations = 0;
    std::uint64_t seed = 0;
    int passes = 0;
    double pass_rate = 0.0;
    int total_generation_calls = 0;
    std::vector<IterationRecord> per_iteration;
};

struct ExperimentSetup {
    Project pristine;
    Scenario scenario;
    BoardMap board;
    /// Called once per iteration so backends never share state across runs.
    std::function<std::shared_ptr<Backend>()> make_backend;
    std::shared_ptr<const Embedder> embedder;
    CompletionOptions completion;
    ExecOptions exec;
};

/// Each iteration copies the pristine project, deletes one seeded-random HAL
/// element (or the whole HAL), completes it and runs the scenario. Failures
/// are recorded per iteration and never stop the run.
ExperimentReport run_experiment(ExperimentKind kind, int iterations, std::uint64_t seed, const ExperimentSetup& setup);

/// Keys: experiment, iterations, seed, passes, pass_rate,
/// total_generation_calls, per_iteration.
std::string experiment_to_json(const ExperimentReport& report, int indent = 2);

}  // namespace halgen
