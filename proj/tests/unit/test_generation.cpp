/*
 * Copyright (c) 2026 halgen contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */
#include <doctest.h>

#include <cstdlib>

#include <json.hpp>

#include "halgen/analysis/symbols.hpp"
#include "halgen/c_ast/parser.hpp"
#include "halgen/completion/completion.hpp"
#include "halgen/error.hpp"
#include "halgen/generation/backend.hpp"
#include "halgen/generation/http_backend.hpp"
#include "halgen/generation/kb_backend.hpp"
#include "halgen/generation/vet.hpp"
#include "stub_server.hpp"
#include "test_support.hpp"

using namespace halgen;

namespace {

const std::string kSetIoMode = R"(void set_io_mode(uint32_t gpio_base, uint32_t pin_mask, uint8_t mode) {
    volatile uint32_t *GPIO_MODER = (uint32_t *)(gpio_base + 0x00);
    uint8_t pin_number = 0;
    while ((pin_mask >> pin_number) != 1) {
        pin_number++;
    }
    *GPIO_MODER &= ~(0x3 << (pin_number * 2));
    *GPIO_MODER |= (mode << (pin_number * 2));
})";

struct Gap {
    Project project;
    SymbolTable table;
    std::vector<MissingElement> missing;
};

Gap gap_for(const std::string& name) {
    Gap g{delete_element(test::demo_project(), name), {}, {}};
    g.table = build_symbol_table(g.project);
    g.missing = detect_missing(g.table);
    return g;
}

RenderedPrompt prompt_for(const MissingElement& m) { return build_prompt(m, infer_signature(m), {}, default_template()); }

std::vector<RejectReason> reasons(const VetResult& r) {
    const auto* rej = std::get_if<Rejection>(&r);
    return rej ? rej->reasons : std::vector<RejectReason>{};
}

/// Sets an environment variable for the lifetime of the guard.
class EnvGuard {
public:
    EnvGuard(const char* name, const char* value) : name_(name) {
        if (const char* old = std::getenv(name)) old_ = old;
        if (value) {
            ::setenv(name, value, 1);
        } else {
            ::unsetenv(name);
        }
    }
    ~EnvGuard() {
        if (old_) {
            ::setenv(name_.c_str(), old_->c_str(), 1);
        } else {
            ::unsetenv(name_.c_str());
        }
    }

private:
    std::string name_;
    std::optional<std::string> old_;
};

class FixedBackend : public Backend {
public:
    explicit FixedBackend(std::string text) : text_(std::move(text)) {}
    std::string id() const override { return "fixed"; }
    BackendReply send(const ChatRequest& r) override {
        last = r;
        return {text_, false};
    }
    ChatRequest last;

private:
    std::string text_;
};

}  // namespace

TEST_SUITE("chat request") {
    TEST_CASE("two messages at temperature zero") {
        const auto g = gap_for("set_io_mode");
        const auto p = prompt_for(g.missing[0]);
        const ChatRequest r = make_chat_request(p, "gpt-4o-mini");
        CHECK(r.temperature == 0.0);
        CHECK(r.model == "gpt-4o-mini");
        REQUIRE(r.messages.size() == 2);
        CHECK(r.messages[0].role == ChatRole::System);
        CHECK(r.messages[0].content == p.section("Cue"));
        CHECK(r.messages[1].role == ChatRole::User);
        CHECK(r.messages[1].content.find(p.section("Instructions")) == 0);
        CHECK(r.messages[1].content.find(p.section("Context")) != std::string::npos);
        const ChatRequest retry = make_chat_request(p, "m", "try again");
        CHECK(retry.messages[1].content.find("try again") != std::string::npos);
    }
}

TEST_SUITE("extract_code") {
    TEST_CASE("fenced with language tag") { CHECK(extract_code("```c\nint f(void){return 0;}\n```") == "int f(void){return 0;}"); }

    TEST_CASE("prose then fence") {
        CHECK(extract_code("Here you go:\n\n```\n#define A 1\n```\nHope it helps.") == "#define A 1");
    }

    TEST_CASE("first of two fences") {
        CHECK(extract_code("```c\n#define A 1\n```\ntext\n```c\n#define B 2\n```") == "#define A 1");
    }

    TEST_CASE("no fence trims") { CHECK(extract_code("  \n#define A 1\n\n") == "#define A 1"); }

    TEST_CASE("unclosed fence runs to the end") { CHECK(extract_code("```c\n#define A 1\n") == "#define A 1"); }

    TEST_CASE("empty results") {
        CHECK_THROWS_AS(extract_code("   \n\t"), EmptyGeneration);
        CHECK_THROWS_AS(extract_code("```c\n\n```"), EmptyGeneration);
    }
}

TEST_SUITE("vet") {
    TEST_CASE("pattern matching") {
        CHECK(matches_pattern("HAL_GPIO_WritePin", "HAL_*"));
        CHECK(matches_pattern("hal_gpio_write", "HAL_*"));
        CHECK(matches_pattern("STM32F4xx", "stm32*"));
        CHECK(matches_pattern("my_hal_thing", "*_hal*"));
        CHECK_FALSE(matches_pattern("USART_DR_OFFSET", "HAL_*"));
        CHECK(matches_pattern("exact", "exact"));
        CHECK_FALSE(matches_pattern("exactly", "exact"));
    }

    TEST_CASE("canonical set_io_mode is accepted") {
        const auto g = gap_for("set_io_mode");
        const auto r = vet_patch(kSetIoMode, g.missing[0], g.table, make_vet_policy(g.table, g.missing));
        REQUIRE(std::holds_alternative<VettedPatch>(r));
        const auto& patch = std::get<VettedPatch>(r);
        CHECK(patch.name == "set_io_mode");
        CHECK(patch.kind == ElementKind::Function);
        CHECK(patch.new_references.empty());
    }

    TEST_CASE("canonical set_io_mode against the closed fixture table") {
        const auto table = build_symbol_table(test::demo_project());
        const MissingElement elem{"set_io_mode", ElementKind::Function, 3, {"GPIOA_BASE", "0x20", "1"}, false, {}};
        CHECK(std::holds_alternative<VettedPatch>(vet_patch(kSetIoMode, elem, table, make_vet_policy(table, {}))));
    }

    TEST_CASE("forbidden vendor call") {
        const auto g = gap_for("set_io_mode");
        std::string code = kSetIoMode;
        code.insert(code.rfind('}'), "    HAL_GPIO_WritePin(gpio_base, pin_mask, 1);\n");
        const auto r = vet_patch(code, g.missing[0], g.table, make_vet_policy(g.table, g.missing));
        CHECK(reasons(r) == std::vector<RejectReason>{RejectReason::ForbiddenReference});
    }

    TEST_CASE("wrong arity") {
        const auto g = gap_for("set_io_mode");
        std::string code = kSetIoMode;
        code.replace(code.find(", uint8_t mode"), std::string(", uint8_t mode").size(), "");
        const auto r = vet_patch(code, g.missing[0], g.table, make_vet_policy(g.table, g.missing));
        CHECK(reasons(r) == std::vector<RejectReason>{RejectReason::WrongArity});
    }

    TEST_CASE("forbidden include") {
        const auto g = gap_for("set_io_mode");
        const auto r = vet_patch("#include \"stm32f4xx_hal.h\"\n" + kSetIoMode, g.missing[0], g.table,
                                 make_vet_policy(g.table, g.missing));
        CHECK(reasons(r) == std::vector<RejectReason>{RejectReason::ForbiddenReference});
    }

    TEST_CASE("includes are stripped from accepted code") {
        const auto g = gap_for("set_io_mode");
        const auto r = vet_patch("#include <stdint.h>\n" + kSetIoMode, g.missing[0], g.table,
                                 make_vet_policy(g.table, g.missing));
        REQUIRE(std::holds_alternative<VettedPatch>(r));
        CHECK(std::get<VettedPatch>(r).code == kSetIoMode);
    }

    TEST_CASE("parse failure, wrong name, multiple definitions") {
        const auto g = gap_for("set_io_mode");
        const auto policy = make_vet_policy(g.table, g.missing);
        CHECK(reasons(vet_patch("void set_io_mode(", g.missing[0], g.table, policy)) ==
              std::vector<RejectReason>{RejectReason::ParseFailed});
        CHECK(reasons(vet_patch("void other(uint32_t a, uint32_t b, uint8_t c) {\n}", g.missing[0], g.table, policy)) ==
              std::vector<RejectReason>{RejectReason::WrongName});
        CHECK(reasons(vet_patch("#include <stdint.h>\n", g.missing[0], g.table, policy)) ==
              std::vector<RejectReason>{RejectReason::WrongName});
        CHECK(reasons(vet_patch(kSetIoMode + "\nvoid helper(void) {\n}\n", g.missing[0], g.table, policy)) ==
              std::vector<RejectReason>{RejectReason::MultipleDefinitions});
    }

    TEST_CASE("kind mismatch is a wrong name") {
        const auto g = gap_for("USART_SR_OFFSET");
        REQUIRE(g.missing[0].kind == ElementKind::Constant);
        const auto policy = make_vet_policy(g.table, g.missing);
        CHECK(reasons(vet_patch("void USART_SR_OFFSET(void) {\n}", g.missing[0], g.table, policy)) ==
              std::vector<RejectReason>{RejectReason::WrongName});
        CHECK(std::holds_alternative<VettedPatch>(vet_patch("#define USART_SR_OFFSET 0x00", g.missing[0], g.table, policy)));
        CHECK(std::holds_alternative<VettedPatch>(vet_patch("uint32_t USART_SR_OFFSET = 0;", g.missing[0], g.table, policy)));
    }

    TEST_CASE("unknown references: permissive records, strict rejects") {
        const auto g = gap_for("enable_gpioa_clk");
        const std::string code =
            "void enable_gpioa_clk(void) {\n    *(volatile uint32_t *)(RCC_BASE + NEW_OFFSET) |= 0x1;\n}";
        const auto loose = vet_patch(code, g.missing[0], g.table, make_vet_policy(g.table, g.missing, false));
        REQUIRE(std::holds_alternative<VettedPatch>(loose));
        CHECK(std::get<VettedPatch>(loose).new_references == std::vector<std::string>{"NEW_OFFSET"});
        const auto strict = vet_patch(code, g.missing[0], g.table, make_vet_policy(g.table, g.missing, true));
        CHECK(reasons(strict) == std::vector<RejectReason>{RejectReason::UnknownReference});
    }

    TEST_CASE("calls must match known signatures") {
        const auto g = gap_for("usart_send_byte");
        const std::string code = "void usart_send_byte(uint32_t usart_base, uint32_t data) {\n    set_io_mode(usart_base, data);\n}";
        CHECK(reasons(vet_patch(code, g.missing[0], g.table, make_vet_policy(g.table, g.missing))) ==
              std::vector<RejectReason>{RejectReason::WrongArity});
    }

    TEST_CASE("several reasons are sorted and unique") {
        const auto g = gap_for("set_io_mode");
        const auto r = vet_patch("void set_io_mode(uint32_t a) {\n    HAL_Init();\n    HAL_Delay(1);\n}", g.missing[0],
                                 g.table, make_vet_policy(g.table, g.missing));
        CHECK(reasons(r) == std::vector<RejectReason>{RejectReason::WrongArity, RejectReason::ForbiddenReference});
        const auto fb = rejection_feedback(std::get<Rejection>(r));
        CHECK(fb.find("rejected") != std::string::npos);
    }

    TEST_CASE("every KB entry passes vetting for its own gap") {
        const KnowledgeBase kb = load_knowledge_base(test::kb_dir());
        for (const auto& [name, entry] : kb.entries) {
            CAPTURE(name);
            const auto g = gap_for(name);
            REQUIRE(g.missing.size() == 1);
            const auto r = vet_patch(entry.text, g.missing[0], g.table, make_vet_policy(g.table, g.missing, true));
            CHECK(std::holds_alternative<VettedPatch>(r));
        }
    }
}

TEST_SUITE("kb backend") {
    TEST_CASE("bundled knowledge base") {
        const KnowledgeBase kb = load_knowledge_base(test::kb_dir());
        CHECK(kb.entries.size() == 12);
        CHECK_NOTHROW(kb.validate());
        CHECK(kb.entries.at("set_io_mode").text == kSetIoMode + "\n");
    }

    TEST_CASE("hit returns the canonical text") {
        KbBackend backend(load_knowledge_base(test::kb_dir()));
        auto shared = std::shared_ptr<Backend>(&backend, [](Backend*) {});
        Generator gen(shared, "gpt-4o-mini");
        const auto g = gap_for("set_io_mode");
        const auto res = gen.generate(prompt_for(g.missing[0]));
        CHECK(res.extracted_code == kSetIoMode);
        CHECK(res.backend_id == "kb");
        CHECK(res.call_index == 1);
        CHECK_FALSE(res.provisional);
        CHECK(gen.calls() == 1);
    }

    TEST_CASE("toggle and constant entries") {
        KbBackend backend(load_knowledge_base(test::kb_dir()));
        const auto toggle = gap_for("hal_gpio_toggle");
        const auto t = extract_code(backend.send(make_chat_request(prompt_for(toggle.missing[0]), "m")).text);
        CHECK(t.find("^= pin_mask") != std::string::npos);
        const auto sr = gap_for("USART_SR_OFFSET");
        CHECK(extract_code(backend.send(make_chat_request(prompt_for(sr.missing[0]), "m")).text) ==
              "#define USART_SR_OFFSET 0x00");
    }

    TEST_CASE("miss falls back to a provisional stub") {
        KbBackend backend(load_knowledge_base(test::kb_dir()));
        const MissingElement foo{"FOO_OFFSET", ElementKind::Constant, 0, {}, true, {}};
        const auto reply = backend.send(make_chat_request(prompt_for(foo), "m"));
        CHECK(extract_code(reply.text) == "#define FOO_OFFSET 0x00");
        CHECK(reply.provisional);
        const MissingElement bar{"bar_fn", ElementKind::Function, 2, {"1", "x"}, false, {}};
        const auto fn = backend.send(make_chat_request(prompt_for(bar), "m"));
        CHECK(fn.provisional);
        const auto unit = parse(extract_code(fn.text), "fb.c");
        REQUIRE(unit.items.size() == 1);
        CHECK(unit.items[0].as<ast::FunctionDef>()->params.size() == 2);
        CHECK(kb_fallback(KnowledgeBase{}, "z", ElementKind::Function, 0).find("z(void)") != std::string::npos);
    }

    TEST_CASE("deterministic") {
        KbBackend backend(load_knowledge_base(test::kb_dir()));
        const auto g = gap_for("hal_gpio_read");
        const auto req = make_chat_request(prompt_for(g.missing[0]), "m");
        CHECK(backend.send(req).text == backend.send(req).text);
    }

    TEST_CASE("unreadable request") {
        KbBackend backend(KnowledgeBase{});
        ChatRequest r;
        r.messages = {{ChatRole::System, "x"}, {ChatRole::User, "no name here"}};
        try {
            backend.send(r);
            FAIL("expected BackendError");
        } catch (const BackendError& e) {
            CHECK(e.category() == BackendErrorCategory::MalformedResponse);
        }
    }

    TEST_CASE("invalid entries") {
        KnowledgeBase kb;
        kb.entries["A"] = KbEntry{ElementKind::Constant, "#define B 1"};
        CHECK_THROWS_AS(kb.validate(), ConfigError);
        kb.entries.clear();
        kb.entries["f"] = KbEntry{ElementKind::Constant, "void f(void) {\n}"};
        CHECK_THROWS_AS(kb.validate(), ConfigError);
        kb.entries.clear();
        kb.entries["g"] = KbEntry{ElementKind::Function, "void g(void) {"};
        CHECK_THROWS_AS(kb.validate(), ConfigError);
        CHECK_THROWS(load_knowledge_base("/nonexistent/kb"));
    }
}

TEST_SUITE("http backend") {
    TEST_CASE("wire format") {
        ChatRequest r{"gpt-4o-mini", 0.0, {{ChatRole::System, "cue"}, {ChatRole::User, "rest"}}};
        const auto j = nlohmann::json::parse(chat_request_body(r));
        CHECK(j.at("model") == "gpt-4o-mini");
        CHECK(j.at("temperature").is_number_integer());
        CHECK(j.at("temperature") == 0);
        CHECK(j.at("messages").size() == 2);
        CHECK(j.at("messages")[0].at("role") == "system");
        CHECK(j.at("messages")[1].at("role") == "user");
        CHECK(chat_request_body(r).find("\"temperature\":0") != std::string::npos);
    }

    TEST_CASE("response parsing") {
        CHECK(parse_chat_response(R"({"choices":[{"message":{"content":"abc"}}]})") == "abc");
        for (const char* bad : {"not json", "{}", R"({"choices":[]})", R"({"choices":[{"message":{}}]})",
                                R"({"choices":[{"message":{"content":3}}]})"}) {
            CAPTURE(bad);
            try {
                parse_chat_response(bad);
                FAIL("expected BackendError");
            } catch (const BackendError& e) {
                CHECK(e.category() == BackendErrorCategory::MalformedResponse);
            }
        }
    }

    TEST_CASE("stub round trip") {
        test::StubServer stub;
        stub.reply_content("```c\n#define USART_SR_OFFSET 0x00\n```");
        EnvGuard env("HALGEN_TEST_TOKEN", "secret-123");
        HttpBackend backend(HttpBackendConfig{stub.endpoint(), "my-model", "HALGEN_TEST_TOKEN", 5.0, 0});
        const auto g = gap_for("USART_SR_OFFSET");
        auto shared = std::shared_ptr<Backend>(&backend, [](Backend*) {});
        Generator gen(shared, "my-model");
        const auto res = gen.generate(prompt_for(g.missing[0]));
        CHECK(res.raw_text == "```c\n#define USART_SR_OFFSET 0x00\n```");
        CHECK(res.extracted_code == "#define USART_SR_OFFSET 0x00");
        CHECK(res.backend_id == "http");
        const auto seen = stub.seen();
        REQUIRE(seen.size() == 1);
        CHECK(seen[0].authorization == "Bearer secret-123");
        CHECK(seen[0].path == "/v1/chat/completions");
        const auto body = nlohmann::json::parse(seen[0].body);
        CHECK(body.at("model") == "my-model");
        CHECK(body.at("temperature") == 0);
        CHECK(body.at("messages")[0].at("content") == "You will be my Custom Hardware Abstraction Layer Generator.");
    }

    TEST_CASE("status codes map to categories") {
        test::StubServer stub;
        EnvGuard env("HALGEN_TEST_TOKEN", "t");
        HttpBackend backend(HttpBackendConfig{stub.endpoint(), "m", "HALGEN_TEST_TOKEN", 5.0, 0});
        const ChatRequest r{"m", 0.0, {{ChatRole::System, "c"}, {ChatRole::User, "u"}}};
        const std::vector<std::pair<int, BackendErrorCategory>> cases = {
            {401, BackendErrorCategory::Auth},
            {403, BackendErrorCategory::Auth},
            {429, BackendErrorCategory::RateLimit},
            {500, BackendErrorCategory::Network},
            {404, BackendErrorCategory::Network},
        };
        for (const auto& [status, category] : cases) {
            CAPTURE(status);
            stub.set_replies({{status, "{}"}});
            try {
                backend.send(r);
                FAIL("expected BackendError");
            } catch (const BackendError& e) {
                CHECK(e.category() == category);
            }
        }
        stub.set_replies({{200, "{\"choices\": oops"}});
        try {
            backend.send(r);
            FAIL("expected BackendError");
        } catch (const BackendError& e) {
            CHECK(e.category() == BackendErrorCategory::MalformedResponse);
        }
    }

    TEST_CASE("token only from the environment") {
        test::StubServer stub;
        EnvGuard env("HALGEN_TEST_TOKEN", nullptr);
        HttpBackend backend(HttpBackendConfig{stub.endpoint(), "m", "HALGEN_TEST_TOKEN", 5.0, 0});
        const ChatRequest r{"m", 0.0, {{ChatRole::System, "c"}, {ChatRole::User, "u"}}};
        try {
            backend.send(r);
            FAIL("expected BackendError");
        } catch (const BackendError& e) {
            CHECK(e.category() == BackendErrorCategory::Auth);
        }
        CHECK(stub.seen().empty());
    }

    TEST_CASE("server down is a network error") {
        EnvGuard env("HALGEN_TEST_TOKEN", "t");
        HttpBackend backend(HttpBackendConfig{test::dead_endpoint(), "m", "HALGEN_TEST_TOKEN", 2.0, 0});
        try {
            backend.send(ChatRequest{"m", 0.0, {{ChatRole::System, "c"}, {ChatRole::User, "u"}}});
            FAIL("expected BackendError");
        } catch (const BackendError& e) {
            CHECK(e.category() == BackendErrorCategory::Network);
        }
    }

    TEST_CASE("bad endpoints") {
        CHECK_THROWS_AS(HttpBackend(HttpBackendConfig{"ftp://x", "m", "E", 1.0, 0}), ConfigError);
        CHECK_THROWS_AS(HttpBackend(HttpBackendConfig{"localhost:8080", "m", "E", 1.0, 0}), ConfigError);
        CHECK_THROWS_AS(HttpBackend(HttpBackendConfig{"http://localhost", "m", "E", 0.0, 0}), ConfigError);
    }
}
