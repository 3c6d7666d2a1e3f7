/*
 * Copyright (c) 2026 halgen contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <chrono>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "halgen/analysis/project.hpp"
#include "halgen/analysis/symbols.hpp"
#include "halgen/generation/backend.hpp"
#include "halgen/generation/vet.hpp"
#include "halgen/prompting/prompt.hpp"
#include "halgen/retrieval/snippets.hpp"

namespace halgen {

struct CompletionLimits {
    int max_iterations = 10;
    int max_calls = 50;
    /// Attempts per element; the element fails once this many are rejected.
    int max_rejections_per_element = 3;

    /// Throws ConfigError unless all limits are positive.
    void validate() const;
};

struct RetryPolicy {
    /// Extra attempts after a failed backend call. Auth errors are never retried.
    int max_retries = 2;
    /// Delay before retry i is backoff[min(i, size-1)].
    std::vector<std::chrono::milliseconds> backoff = {std::chrono::seconds(1), std::chrono::seconds(4)};
    /// Defaults to std::this_thread::sleep_for.
    std::function<void(std::chrono::milliseconds)> sleep;
};

struct CompletionOptions {
    CompletionLimits limits;
    RetryPolicy retry;
    std::size_t top_k = 3;
    PromptTemplate prompt_template = default_template();
    std::string model = "gpt-4o-mini";
    bool strict_vetting = false;
    std::vector<std::string> forbidden_name_patterns = {"HAL_*", "stm32*", "*_hal*"};
    /// When set, each inserted element is scored against its definition here.
    std::optional<Project> reference;
};

enum class CompletionStatus { Closed, LimitExceeded, ElementsFailed, BackendFailed };

std::string_view to_string(CompletionStatus status);

struct InsertedElement {
    std::string name;
    ElementKind kind;
    std::string backend_id;
    int rejection_count = 0;
    bool provisional = false;
};

struct FailedElement {
    std::string name;
    std::vector<std::string> reasons;
};

struct CompletionReport {
    int iterations_used = 0;
    int total_calls = 0;
    int successful_calls = 0;
    std::vector<InsertedElement> inserted;
    std::vector<FailedElement> failures;
    bool closed = false;
    std::optional<std::vector<std::pair<std::string, double>>> per_element_similarity;
    CompletionStatus status = CompletionStatus::Closed;
    std::string message;
};

/// Keys: iterations_used, total_calls, inserted, failures, closed,
/// per_element_similarity.
std::string report_to_json(const CompletionReport& report, int indent = 2);

struct CompletionOutcome {
    Project project;
    CompletionReport report;
};

/// Runs detect, retrieve, prompt, generate, vet and insert until nothing is
/// missing or a limit is hit. Limit and backend failures are reported through
/// the status rather than thrown.
CompletionOutcome complete(Project project, Backend& backend, const Retriever& retriever,
                           const CompletionOptions& options = {});

/// Text used to query the retriever for an element.
std::string retrieval_query(const MissingElement& element);

/// Inserts the patch text into the HAL unit and re-parses it. Constants go
/// after the last constant or global (or after leading includes), functions
/// at the end. Throws InternalError if the result does not parse.
Project insert_patch(Project project, const VettedPatch& patch);

/// Removes the named HAL item together with its attached leading comment.
/// Throws NotFound or NotInHalUnit.
Project delete_element(Project project, std::string_view name);

/// Removes every non-include item of the HAL unit. Names come back in source order.
std::pair<Project, std::vector<std::string>> delete_all_hal(Project project);

}  // namespace halgen
