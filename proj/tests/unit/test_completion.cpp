/*
 * Copyright (c) 2026 halgen contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */
#include <doctest.h>

#include <cstdlib>
#include <deque>

#include <json.hpp>

#include "halgen/analysis/symbols.hpp"
#include "halgen/c_ast/parser.hpp"
#include "halgen/c_ast/printer.hpp"
#include "halgen/completion/completion.hpp"
#include "halgen/error.hpp"
#include "halgen/generation/http_backend.hpp"
#include "halgen/generation/kb_backend.hpp"
#include "halgen/generation/vet.hpp"
#include "halgen/simulate/interpreter.hpp"
#include "stub_server.hpp"
#include "test_support.hpp"

using namespace halgen;

namespace {

KbBackend kb_backend() { return KbBackend(load_knowledge_base(test::kb_dir())); }

CompletionOptions fast_options() {
    CompletionOptions o;
    o.retry.sleep = [](std::chrono::milliseconds) {};
    return o;
}

CompletionOutcome run(Project p, Backend& backend, CompletionOptions options = fast_options()) {
    const Retriever r = Retriever::from_project(p);
    return complete(std::move(p), backend, r, options);
}

/// Replays scripted replies (or errors) in order; the last entry repeats.
class ScriptedBackend : public Backend {
public:
    struct Step {
        std::string text;
        std::optional<BackendErrorCategory> error;
    };
    explicit ScriptedBackend(std::vector<Step> steps) : steps_(std::move(steps)) {}
    std::string id() const override { return "scripted"; }
    BackendReply send(const ChatRequest& request) override {
        requests.push_back(request);
        const Step& s = steps_[std::min(requests.size() - 1, steps_.size() - 1)];
        if (s.error) throw BackendError(*s.error, "scripted failure");
        return {s.text, false};
    }
    std::vector<ChatRequest> requests;

private:
    std::vector<Step> steps_;
};

VettedPatch vetted(const Project& p, const std::string& code) {
    const auto table = build_symbol_table(p);
    const auto missing = detect_missing(table);
    REQUIRE_FALSE(missing.empty());
    const auto r = vet_patch(code, missing[0], table, make_vet_policy(table, missing));
    REQUIRE(std::holds_alternative<VettedPatch>(r));
    return std::get<VettedPatch>(r);
}

bool verdict_passes(const Project& p) {
    return exec_program(p, default_board_map(), load_scenario(test::demo_dir() / "scenario.json")).verdict.passed;
}

class EnvGuard {
public:
    EnvGuard(const char* name, const char* value) : name_(name) { ::setenv(name, value, 1); }
    ~EnvGuard() { ::unsetenv(name_.c_str()); }

private:
    std::string name_;
};

}  // namespace

TEST_SUITE("complete") {
    TEST_CASE("single deletion needs one call") {
        auto backend = kb_backend();
        const auto out = run(delete_element(test::demo_project(), "set_io_mode"), backend);
        CHECK(out.report.closed);
        CHECK(out.report.status == CompletionStatus::Closed);
        REQUIRE(out.report.inserted.size() == 1);
        CHECK(out.report.inserted[0].name == "set_io_mode");
        CHECK(out.report.inserted[0].backend_id == "kb");
        CHECK(out.report.successful_calls == 1);
        CHECK(out.report.total_calls == 1);
        CHECK(out.report.iterations_used == 1);
    }

    TEST_CASE("whole HAL needs twelve calls") {
        auto backend = kb_backend();
        const auto out = run(delete_all_hal(test::demo_project()).first, backend);
        CHECK(out.report.closed);
        CHECK(out.report.inserted.size() == 12);
        CHECK(out.report.successful_calls == 12);
        CHECK(out.report.total_calls == 12);
        CHECK(out.report.failures.empty());
        CHECK(detect_missing(build_symbol_table(out.project)).empty());
        CHECK(verdict_passes(out.project));
    }

    TEST_CASE("closed project is left alone") {
        auto backend = kb_backend();
        const Project p = test::demo_project();
        const auto out = run(p, backend);
        CHECK(out.report.closed);
        CHECK(out.report.total_calls == 0);
        CHECK(out.report.iterations_used == 0);
        CHECK(out.project.hal_unit().source == p.hal_unit().source);
    }

    TEST_CASE("regenerating any single element keeps the verdict") {
        const Project pristine = test::demo_project();
        REQUIRE(verdict_passes(pristine));
        int cases = 0;
        for (const auto& item : pristine.hal_unit().items) {
            if (!item.is_definition()) continue;
            CAPTURE(item.name());
            auto backend = kb_backend();
            CompletionOptions o = fast_options();
            o.reference = pristine;
            const auto out = run(delete_element(pristine, item.name()), backend, o);
            CHECK(out.report.closed);
            CHECK(out.report.total_calls == 1);
            CHECK(verdict_passes(out.project));
            REQUIRE(out.report.per_element_similarity);
            REQUIRE(out.report.per_element_similarity->size() == 1);
            CHECK(out.report.per_element_similarity->at(0).second == 1.0);
            ++cases;
        }
        CHECK(cases == 12);
    }

    TEST_CASE("call accounting holds") {
        auto backend = kb_backend();
        const auto out = run(delete_all_hal(test::demo_project()).first, backend);
        const auto& r = out.report;
        CHECK(static_cast<int>(r.inserted.size()) <= r.successful_calls);
        CHECK(r.successful_calls <= r.total_calls);
        CHECK(r.total_calls <= CompletionLimits{}.max_calls);
    }

    TEST_CASE("rejections retry with feedback") {
        ScriptedBackend backend({{"```c\nvoid enable_gpioa_clk(void) {\n    HAL_RCC_GPIOA_CLK_ENABLE();\n}\n```", {}},
                                 {"```c\nvoid enable_gpioa_clk(void) {\n    *(volatile uint32_t *)(RCC_BASE + "
                                  "RCC_AHB1ENR_OFFSET) |= 0x1;\n}\n```",
                                  {}}});
        const auto out = run(delete_element(test::demo_project(), "enable_gpioa_clk"), backend);
        CHECK(out.report.closed);
        CHECK(out.report.total_calls == 2);
        CHECK(out.report.successful_calls == 1);
        REQUIRE(out.report.inserted.size() == 1);
        CHECK(out.report.inserted[0].rejection_count == 1);
        REQUIRE(backend.requests.size() == 2);
        CHECK(backend.requests[1].messages[1].content.find("ForbiddenReference") != std::string::npos);
        CHECK(backend.requests[0].messages[1].content.find("ForbiddenReference") == std::string::npos);
        CHECK(verdict_passes(out.project));
    }

    TEST_CASE("element fails after the rejection budget") {
        ScriptedBackend backend(std::vector<ScriptedBackend::Step>{{"```c\nvoid wrong_name(void) {\n}\n```", {}}});
        CompletionOptions o = fast_options();
        o.limits.max_rejections_per_element = 3;
        const auto out = run(delete_element(test::demo_project(), "enable_gpioa_clk"), backend, o);
        CHECK_FALSE(out.report.closed);
        CHECK(out.report.status == CompletionStatus::ElementsFailed);
        CHECK(out.report.total_calls == 3);
        REQUIRE(out.report.failures.size() == 1);
        CHECK(out.report.failures[0].name == "enable_gpioa_clk");
        CHECK(out.report.failures[0].reasons == std::vector<std::string>{"WrongName"});
    }

    TEST_CASE("empty generations count as parse failures") {
        ScriptedBackend backend(std::vector<ScriptedBackend::Step>{{"   ", {}}});
        const auto out = run(delete_element(test::demo_project(), "RCC_BASE"), backend);
        REQUIRE(out.report.failures.size() == 1);
        CHECK(out.report.failures[0].reasons == std::vector<std::string>{"ParseFailed"});
    }

    TEST_CASE("call budget") {
        ScriptedBackend backend(std::vector<ScriptedBackend::Step>{{"```c\nvoid nope(void) {\n}\n```", {}}});
        CompletionOptions o = fast_options();
        o.limits.max_calls = 2;
        o.limits.max_rejections_per_element = 3;
        const auto out = run(delete_element(test::demo_project(), "enable_gpioa_clk"), backend, o);
        CHECK(out.report.status == CompletionStatus::LimitExceeded);
        CHECK(out.report.total_calls == 2);
        CHECK_FALSE(out.report.closed);
    }

    TEST_CASE("iteration budget") {
        // The stub keeps introducing a new constant, so every round finds a fresh gap.
        class Cascade : public Backend {
        public:
            std::string id() const override { return "cascade"; }
            BackendReply send(const ChatRequest& r) override {
                const std::string& u = r.messages[1].content;
                const auto a = u.find('\'') + 1;
                const std::string name = u.substr(a, u.find('\'', a) - a);
                return {"#define " + name + " (" + name + "_NEXT + 1)", false};
            }
        } backend;
        CompletionOptions o = fast_options();
        o.limits.max_iterations = 3;
        const auto out = run(delete_element(test::demo_project(), "USART_FLAG_TXE"), backend, o);
        CHECK(out.report.status == CompletionStatus::LimitExceeded);
        CHECK(out.report.iterations_used == 3);
        CHECK(out.report.total_calls == 3);
        CHECK_FALSE(out.report.closed);
    }

    TEST_CASE("transient errors retry, auth errors do not") {
        std::vector<std::chrono::milliseconds> slept;
        CompletionOptions o = fast_options();
        o.retry.sleep = [&](std::chrono::milliseconds d) { slept.push_back(d); };

        ScriptedBackend flaky({{"", BackendErrorCategory::Network},
                               {"", BackendErrorCategory::RateLimit},
                               {"#define RCC_BASE 0x40023800", {}}});
        const auto ok = run(delete_element(test::demo_project(), "RCC_BASE"), flaky, o);
        CHECK(ok.report.closed);
        CHECK(ok.report.total_calls == 3);
        CHECK(ok.report.successful_calls == 1);
        CHECK(slept == std::vector<std::chrono::milliseconds>{std::chrono::seconds(1), std::chrono::seconds(4)});

        slept.clear();
        ScriptedBackend denied({{"", BackendErrorCategory::Auth}});
        const auto bad = run(delete_element(test::demo_project(), "RCC_BASE"), denied, o);
        CHECK(bad.report.status == CompletionStatus::BackendFailed);
        CHECK(bad.report.total_calls == 1);
        CHECK(slept.empty());
        REQUIRE(bad.report.failures.size() == 1);
        CHECK(bad.report.failures[0].name == "RCC_BASE");
    }

    TEST_CASE("network failure exhausts retries then stops the run") {
        ScriptedBackend down({{"", BackendErrorCategory::Network}});
        const auto out = run(delete_all_hal(test::demo_project()).first, down);
        CHECK(out.report.status == CompletionStatus::BackendFailed);
        CHECK(out.report.total_calls == 3);
        CHECK(out.report.failures.size() == 1);
        CHECK_FALSE(out.report.closed);
    }

    TEST_CASE("http backend against a local stub") {
        test::StubServer stub;
        stub.reply_content("Sure:\n```c\n#define RCC_BASE 0x40023800\n```\n");
        EnvGuard env("HALGEN_TEST_TOKEN", "abc");
        HttpBackend backend(HttpBackendConfig{stub.endpoint(), "gpt-4o-mini", "HALGEN_TEST_TOKEN", 5.0, 0});
        const auto out = run(delete_element(test::demo_project(), "RCC_BASE"), backend);
        CHECK(out.report.closed);
        CHECK(out.report.inserted.at(0).backend_id == "http");
        CHECK(stub.seen().size() == 1);
    }

    TEST_CASE("provisional fallback is reported") {
        KnowledgeBase kb = load_knowledge_base(test::kb_dir());
        kb.entries.erase("USART_FLAG_TXE");
        KbBackend backend(kb);
        const auto out = run(delete_element(test::demo_project(), "USART_FLAG_TXE"), backend);
        CHECK(out.report.closed);
        REQUIRE(out.report.inserted.size() == 1);
        CHECK(out.report.inserted[0].provisional);
        // A zero TXE mask makes the transmit loop spin until fuel runs out.
        CHECK_FALSE(verdict_passes(out.project));
    }

    TEST_CASE("report JSON keys") {
        auto backend = kb_backend();
        CompletionOptions o = fast_options();
        o.reference = test::demo_project();
        const auto out = run(delete_element(test::demo_project(), "hal_gpio_read"), backend, o);
        const auto j = nlohmann::ordered_json::parse(report_to_json(out.report));
        std::vector<std::string> keys;
        for (const auto& [k, v] : j.items()) keys.push_back(k);
        CHECK(keys == std::vector<std::string>{"iterations_used", "total_calls", "inserted", "failures", "closed",
                                               "per_element_similarity"});
        CHECK(j.at("per_element_similarity")[0].at("name") == "hal_gpio_read");
        CHECK(j.at("per_element_similarity")[0].at("similarity") == 1.0);
        const auto none = nlohmann::json::parse(report_to_json(run(test::demo_project(), backend).report));
        CHECK(none.at("per_element_similarity").is_null());
    }

    TEST_CASE("limits validate") {
        CHECK_THROWS_AS((CompletionLimits{0, 1, 1}.validate()), ConfigError);
        CHECK_THROWS_AS((CompletionLimits{1, 0, 1}.validate()), ConfigError);
        CHECK_THROWS_AS((CompletionLimits{1, 1, 0}.validate()), ConfigError);
        CHECK_NOTHROW(CompletionLimits{}.validate());
    }

    TEST_CASE("retrieval query") {
        const MissingElement e{"set_io_mode", ElementKind::Function, 3, {"GPIOA_BASE", "0x20", "1"}, false, {}};
        CHECK(retrieval_query(e) == "set_io_mode GPIOA_BASE, 0x20, 1");
    }
}

TEST_SUITE("editing") {
    TEST_CASE("constant goes after the last constant") {
        std::string hal = "#include <stdint.h>\n\n";
        for (int i = 0; i < 7; ++i) hal += "#define C" + std::to_string(i) + " " + std::to_string(i) + "\n";
        hal += "\nuint32_t f(void) {\n    return RCC_BASE;\n}\n";
        const Project p = make_project({{"hal.c", hal}}, "hal.c");
        const Project out = insert_patch(p, vetted(p, "#define RCC_BASE 0x40023800"));
        const auto& items = out.hal_unit().items;
        REQUIRE(items.size() == 10);
        CHECK(items[8].name() == "RCC_BASE");
        CHECK(items[9].name() == "f");
    }

    TEST_CASE("constant without existing constants goes after includes") {
        const Project p = make_project({{"hal.c", "#include <stdint.h>\nuint32_t f(void) {\n    return K;\n}\n"}}, "hal.c");
        const auto& items = insert_patch(p, vetted(p, "#define K 3")).hal_unit().items;
        REQUIRE(items.size() == 3);
        CHECK(items[1].name() == "K");
    }

    TEST_CASE("function into an empty HAL unit") {
        const Project p = make_project({{"app.c", "void main2(void) { g(); }\n"}, {"hal.c", ""}}, "hal.c");
        const Project out = insert_patch(p, vetted(p, "void g(void) {\n}"));
        REQUIRE(out.hal_unit().items.size() == 1);
        CHECK(out.hal_unit().items[0].name() == "g");
    }

    TEST_CASE("set_io_mode appears once after insertion") {
        const Project p = delete_element(test::demo_project(), "set_io_mode");
        const Project out = insert_patch(p, vetted(p, test::read_text(test::kb_dir() / "set_io_mode.c")));
        const std::string printed = pretty_print(out.hal_unit());
        const auto first = printed.find("void set_io_mode(");
        REQUIRE(first != std::string::npos);
        CHECK(printed.find("void set_io_mode(", first + 1) == std::string::npos);
    }

    TEST_CASE("delete then reinsert restores the structure") {
        const Project pristine = test::demo_project();
        const KnowledgeBase kb = load_knowledge_base(test::kb_dir());
        for (const auto& [name, entry] : kb.entries) {
            CAPTURE(name);
            const Project cut = delete_element(pristine, name);
            CHECK(cut.units[0].source == pristine.units[0].source);
            const Project back = insert_patch(cut, vetted(cut, entry.text));
            const auto& a = pristine.hal_unit();
            const auto& b = back.hal_unit();
            REQUIRE(a.items.size() == b.items.size());
            for (const auto& item : a.items) {
                if (!item.is_definition()) continue;
                const auto* other = b.find(item.name());
                REQUIRE(other);
                CHECK(*other == item);
            }
        }
    }

    TEST_CASE("delete errors") {
        CHECK_THROWS_AS(delete_element(test::demo_project(), "nonexistent"), NotFound);
        CHECK_THROWS_AS(delete_element(test::demo_project(), "main"), NotInHalUnit);
        CHECK_THROWS_AS(delete_element(test::demo_project(), "GPIOA_BASE"), NotInHalUnit);
    }

    TEST_CASE("delete removes the attached comment only") {
        const Project cut = delete_element(test::demo_project(), "set_io_mode");
        const std::string& src = cut.hal_unit().source;
        CHECK(src.find("mode: 0 input") == std::string::npos);
        CHECK(src.find("Turns on the AHB1 clock") != std::string::npos);
        CHECK(src.find("\n\n\n") == std::string::npos);
    }

    TEST_CASE("delete_all_hal") {
        const auto [stripped, names] = delete_all_hal(test::demo_project());
        CHECK(names.size() == 12);
        CHECK(names.front() == "RCC_BASE");
        CHECK(names.back() == "usart_send_byte");
        for (const auto& item : stripped.hal_unit().items) CHECK(item.as<ast::IncludeDirective>());
        const auto again = delete_all_hal(stripped);
        CHECK(again.second.empty());
        CHECK(detect_missing(build_symbol_table(stripped)).size() >= 6);
    }
}
