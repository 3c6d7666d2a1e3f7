/*
 * Copyright (c) 2026 halgen contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */
#include "halgen/completion/completion.hpp"

#include <algorithm>
#include <set>
#include <thread>

#include <json.hpp>

#include "halgen/analysis/similarity.hpp"
#include "halgen/c_ast/parser.hpp"
#include "halgen/c_ast/printer.hpp"
#include "halgen/error.hpp"

namespace halgen {

void CompletionLimits::validate() const {
    if (max_iterations <= 0) throw ConfigError("limits.max_iterations", "must be positive");
    if (max_calls <= 0) throw ConfigError("limits.max_calls", "must be positive");
    if (max_rejections_per_element <= 0) throw ConfigError("limits.max_rejections_per_element", "must be positive");
}

std::string_view to_string(CompletionStatus status) {
    switch (status) {
        case CompletionStatus::Closed: return "closed";
        case CompletionStatus::LimitExceeded: return "limit_exceeded";
        case CompletionStatus::ElementsFailed: return "elements_failed";
        case CompletionStatus::BackendFailed: return "backend_failed";
    }
    return "?";
}

std::string report_to_json(const CompletionReport& report, int indent) {
    nlohmann::ordered_json j;
    j["iterations_used"] = report.iterations_used;
    j["total_calls"] = report.total_calls;
    j["inserted"] = nlohmann::ordered_json::array();
    for (const auto& e : report.inserted) {
        j["inserted"].push_back({{"name", e.name},
                                 {"kind", to_string(e.kind)},
                                 {"backend_id", e.backend_id},
                                 {"rejection_count", e.rejection_count},
                                 {"provisional", e.provisional}});
    }
    j["failures"] = nlohmann::ordered_json::array();
    for (const auto& f : report.failures) j["failures"].push_back({{"name", f.name}, {"reasons", f.reasons}});
    j["closed"] = report.closed;
    if (report.per_element_similarity) {
        j["per_element_similarity"] = nlohmann::ordered_json::array();
        for (const auto& [name, sim] : *report.per_element_similarity) {
            j["per_element_similarity"].push_back({{"name", name}, {"similarity", sim}});
        }
    } else {
        j["per_element_similarity"] = nullptr;
    }
    return j.dump(indent);
}

std::string retrieval_query(const MissingElement& element) {
    std::string q = element.name;
    for (std::size_t i = 0; i < element.sample_args.size(); ++i) q += (i ? ", " : " ") + element.sample_args[i];
    return q;
}

namespace {

ast::TranslationUnit reparse(const std::string& source, const std::string& file_id, std::string_view what) {
    try {
        return parse(source, file_id);
    } catch (const SourceError& e) {
        throw InternalError(std::string(what) + " left " + file_id + " unparseable: " + e.what());
    }
}

std::size_t line_end(const std::string& s, std::size_t offset) {
    const auto nl = s.find('\n', offset);
    return nl == std::string::npos ? s.size() : nl + 1;
}

std::size_t line_start(const std::string& s, std::size_t offset) {
    const auto nl = offset == 0 ? std::string::npos : s.rfind('\n', offset - 1);
    return nl == std::string::npos ? 0 : nl + 1;
}

std::string trim(std::string_view s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string_view::npos) return {};
    const auto b = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(a, b - a + 1));
}

bool is_comment_line(std::string_view line) {
    const std::string t = trim(line);
    return t.starts_with("//") || t.starts_with("/*") || t.starts_with("*");
}

const ast::TopLevelItem* find_item(const ast::TranslationUnit& unit, std::string_view name) {
    for (const auto& item : unit.items) {
        if (item.is_definition() && item.name() == name) return &item;
    }
    return nullptr;
}

}  // namespace

Project insert_patch(Project project, const VettedPatch& patch) {
    ast::TranslationUnit& unit = project.hal_unit();
    std::string source = unit.source;
    const std::string code = trim(patch.code);
    const bool is_constant = patch.item.as<ast::FunctionDef>() == nullptr;

    if (is_constant) {
        std::size_t at = 0;
        const ast::TopLevelItem* last_const = nullptr;
        const ast::TopLevelItem* last_leading_include = nullptr;
        bool leading = true;
        for (const auto& item : unit.items) {
            if (item.as<ast::MacroConst>() || item.as<ast::GlobalDecl>()) last_const = &item;
            if (leading && item.as<ast::IncludeDirective>()) {
                last_leading_include = &item;
            } else {
                leading = false;
            }
        }
        if (last_const) {
            at = line_end(source, last_const->span.end_offset);
            source.insert(at, code + "\n");
        } else if (last_leading_include) {
            at = line_end(source, last_leading_include->span.end_offset);
            source.insert(at, "\n" + code + "\n");
        } else {
            source.insert(0, code + (source.empty() ? "\n" : "\n\n"));
        }
    } else {
        if (!source.empty() && source.back() != '\n') source += '\n';
        if (!trim(source).empty()) source += '\n';
        source += code + "\n";
    }
    unit = reparse(source, unit.file_id, "inserting " + patch.name);
    return project;
}

Project delete_element(Project project, std::string_view name) {
    const std::size_t hal = project.hal_unit_index();
    for (std::size_t u = 0; u < project.units.size(); ++u) {
        if (u != hal && find_item(project.units[u], name)) {
            throw NotInHalUnit("'" + std::string(name) + "' is defined in " + project.units[u].file_id +
                               ", not in the HAL unit");
        }
    }
    ast::TranslationUnit& unit = project.units[hal];
    const ast::TopLevelItem* item = find_item(unit, name);
    if (!item) throw NotFound("no definition of '" + std::string(name) + "' in the HAL unit");

    std::string source = unit.source;
    std::size_t begin = item->span.begin_offset;
    std::size_t end = item->span.end_offset;
    // Whole lines when the item has them to itself.
    const std::size_t ls = line_start(source, begin);
    if (trim(std::string_view(source).substr(ls, begin - ls)).empty()) begin = ls;
    const std::size_t le = line_end(source, end);
    if (const std::string rest = trim(std::string_view(source).substr(end, le - end));
        rest.empty() || rest.starts_with("//")) {
        end = le;
    }
    // Directly attached comment lines above.
    while (begin > 0 && begin == line_start(source, begin)) {
        const std::size_t prev = line_start(source, begin - 1);
        if (!is_comment_line(std::string_view(source).substr(prev, begin - prev))) break;
        begin = prev;
    }
    source.erase(begin, end - begin);
    // Collapse the blank-line run left at the seam.
    std::size_t a = begin;
    std::size_t b = begin;
    while (a > 0 && source[a - 1] == '\n') --a;
    while (b < source.size() && source[b] == '\n') ++b;
    std::size_t keep = std::min<std::size_t>(b - a, 2);
    if (a == 0) keep = 0;
    if (b == source.size() && a > 0) keep = 1;
    source.replace(a, b - a, std::string(keep, '\n'));
    unit = reparse(source, unit.file_id, "deleting " + std::string(name));
    return project;
}

std::pair<Project, std::vector<std::string>> delete_all_hal(Project project) {
    std::vector<std::string> names;
    for (const auto& item : project.hal_unit().items) {
        if (item.is_definition()) names.push_back(item.name());
    }
    for (const auto& name : names) project = delete_element(std::move(project), name);
    return {std::move(project), std::move(names)};
}

namespace {

class Run {
public:
    Run(Project project, Backend& backend, const Retriever& retriever, const CompletionOptions& options)
        : project_(std::move(project)), generator_(std::shared_ptr<Backend>(&backend, [](Backend*) {}), options.model),
          retriever_(retriever), options_(options) {}

    CompletionOutcome run() {
        options_.limits.validate();
        bool stop = false;
        while (!stop) {
            SymbolTable table = build_symbol_table(project_);
            std::vector<MissingElement> missing = pending(table);
            if (missing.empty()) break;
            if (report_.iterations_used >= options_.limits.max_iterations) {
                halt(CompletionStatus::LimitExceeded, "iteration limit reached");
                break;
            }
            ++report_.iterations_used;
            for (const MissingElement& elem : missing) {
                table = build_symbol_table(project_);
                if (!process(elem, table, missing)) {
                    stop = true;
                    break;
                }
            }
        }
        finish();
        return {std::move(project_), std::move(report_)};
    }

private:
    std::vector<MissingElement> pending(const SymbolTable& table) const {
        std::vector<MissingElement> missing = detect_missing(table);
        std::erase_if(missing, [&](const MissingElement& m) { return failed_.count(m.name) > 0; });
        return missing;
    }

    void halt(CompletionStatus status, std::string message) {
        if (report_.status == CompletionStatus::Closed || report_.status == CompletionStatus::ElementsFailed) {
            report_.status = status;
            report_.message = std::move(message);
        }
    }

    void fail(const std::string& name, std::vector<std::string> reasons) {
        failed_.insert(name);
        report_.failures.push_back({name, std::move(reasons)});
        if (report_.status == CompletionStatus::Closed) report_.status = CompletionStatus::ElementsFailed;
    }

    bool budget_left() const { return static_cast<int>(generator_.calls()) < options_.limits.max_calls; }

    /// nullopt when the backend gave up or the call budget ran out.
    std::optional<GenerationResult> call(const RenderedPrompt& prompt, const std::string& feedback,
                                         const std::string& name) {
        for (int attempt = 0;; ++attempt) {
            if (!budget_left()) {
                halt(CompletionStatus::LimitExceeded, "call limit reached");
                return std::nullopt;
            }
            try {
                return generator_.generate(prompt, feedback);
            } catch (const BackendError& e) {
                if (e.category() == BackendErrorCategory::Auth || attempt >= options_.retry.max_retries) {
                    fail(name, {"BackendError: " + std::string(e.what())});
                    halt(CompletionStatus::BackendFailed, e.what());
                        return std::nullopt;
                }
                const auto& backoff = options_.retry.backoff;
                if (!backoff.empty()) {
                    const auto delay = backoff[std::min<std::size_t>(static_cast<std::size_t>(attempt), backoff.size() - 1)];
                    if (options_.retry.sleep) {
                        options_.retry.sleep(delay);
                    } else {
                        std::this_thread::sleep_for(delay);
                    }
                }
            }
        }
    }

    /// False when the whole run must stop.
    bool process(const MissingElement& elem, const SymbolTable& table, const std::vector<MissingElement>& missing) {
        const Signature signature = infer_signature(elem);
        const RenderedPrompt prompt =
            build_prompt(elem, signature, retriever_.top_k(retrieval_query(elem), options_.top_k), options_.prompt_template);
        const VetPolicy policy = make_vet_policy(table, missing, options_.strict_vetting, options_.forbidden_name_patterns);

        std::string feedback;
        std::vector<std::string> reasons;
        for (int rejections = 0; rejections < options_.limits.max_rejections_per_element;) {
            std::optional<GenerationResult> result;
            std::optional<VetResult> vetted;
            try {
                result = call(prompt, feedback, elem.name);
                if (!result) return false;
                vetted = vet_patch(result->extracted_code, elem, table, policy);
            } catch (const EmptyGeneration& e) {
                vetted = Rejection{{RejectReason::ParseFailed}, e.what()};
            }
            if (auto* patch = std::get_if<VettedPatch>(&*vetted)) {
                project_ = insert_patch(std::move(project_), *patch);
                ++report_.successful_calls;
                report_.inserted.push_back({elem.name, elem.kind, generator_.backend().id(), rejections,
                                            result->provisional});
                return true;
            }
            const auto& rejection = std::get<Rejection>(*vetted);
            ++rejections;
            for (RejectReason r : rejection.reasons) {
                const std::string s(to_string(r));
                if (std::find(reasons.begin(), reasons.end(), s) == reasons.end()) reasons.push_back(s);
            }
            feedback = rejection_feedback(rejection);
        }
        fail(elem.name, std::move(reasons));
        return true;
    }

    void finish() {
        report_.total_calls = static_cast<int>(generator_.calls());
        const bool nothing_missing = detect_missing(build_symbol_table(project_)).empty();
        report_.closed = nothing_missing && report_.failures.empty();
        if (report_.closed) {
            report_.status = CompletionStatus::Closed;
        } else if (report_.status == CompletionStatus::Closed) {
            report_.status = CompletionStatus::LimitExceeded;
        }
        if (options_.reference) {
            std::vector<std::pair<std::string, double>> sims;
            for (const auto& e : report_.inserted) {
                const auto* original = find_item(options_.reference->hal_unit(), e.name);
                const auto* generated = find_item(project_.hal_unit(), e.name);
                if (original && generated) {
                    sims.emplace_back(e.name, token_similarity(print_item(*original), print_item(*generated)));
                }
            }
            report_.per_element_similarity = std::move(sims);
        }
    }

    Project project_;
    Generator generator_;
    const Retriever& retriever_;
    const CompletionOptions& options_;
    CompletionReport report_;
    std::set<std::string, std::less<>> failed_;
};

}  // namespace

CompletionOutcome complete(Project project, Backend& backend, const Retriever& retriever,
                           const CompletionOptions& options) {
    project.validate();
    return Run(std::move(project), backend, retriever, options).run();
}

}  // namespace halgen
