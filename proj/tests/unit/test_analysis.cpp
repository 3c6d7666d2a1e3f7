/*
 * Copyright (c) 2026 halgen contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */
#include <doctest.h>

#include <random>

#include "halgen/analysis/similarity.hpp"
#include "halgen/analysis/symbols.hpp"
#include "halgen/c_ast/lexer.hpp"
#include "halgen/c_ast/parser.hpp"
#include "halgen/completion/completion.hpp"
#include "halgen/error.hpp"
#include "test_support.hpp"

using namespace halgen;

namespace {

Project two_units(const std::string& app, const std::string& hal) {
    return make_project({{"app.c", app}, {"hal.c", hal}}, "hal.c");
}

std::vector<std::string> names(const std::vector<MissingElement>& missing) {
    std::vector<std::string> out;
    for (const auto& m : missing) out.push_back(m.name);
    return out;
}

// Full (n+1)x(m+1) table, kept separate from the two-row version under test.
std::size_t edit_distance_table(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    std::vector<std::vector<std::size_t>> d(a.size() + 1, std::vector<std::size_t>(b.size() + 1));
    for (std::size_t i = 0; i <= a.size(); ++i) d[i][0] = i;
    for (std::size_t j = 0; j <= b.size(); ++j) d[0][j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        for (std::size_t j = 1; j <= b.size(); ++j) {
            d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1, d[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0u : 1u)});
        }
    }
    return d[a.size()][b.size()];
}

const char* const kSetIoMode = R"(void set_io_mode(uint32_t gpio_base, uint32_t pin_mask, uint8_t mode) {
    volatile uint32_t *GPIO_MODER = (uint32_t *)(gpio_base + 0x00);
    uint8_t pin_number = 0;
    while ((pin_mask >> pin_number) != 1) {
        pin_number++;
    }
    *GPIO_MODER &= ~(0x3 << (pin_number * 2));
    *GPIO_MODER |= (mode << (pin_number * 2));
}
)";

const char* const kSetIoModeFor = R"(void set_io_mode(uint32_t gpio_base, uint32_t pin_mask, uint8_t mode) {
    volatile uint32_t *GPIO_MODER = (uint32_t *)(gpio_base + 0x00);
    uint8_t pin_number = 0;
    for (pin_number = 0; (pin_mask >> pin_number) != 1; pin_number++) {
    }
    *GPIO_MODER &= ~(0x3 << (pin_number * 2));
    *GPIO_MODER |= (mode << (pin_number * 2));
}
)";

}  // namespace

TEST_SUITE("project") {
    TEST_CASE("validate") {
        CHECK_THROWS_AS(make_project({{"a.c", ""}}, "hal.c"), Error);
        CHECK_THROWS_AS(make_project({{"a.c", ""}, {"a.c", ""}}, "a.c"), Error);
        CHECK_NOTHROW(make_project({{"a.c", ""}}, "a.c"));
    }

    TEST_CASE("demo loads in name order") {
        const Project p = test::demo_project();
        REQUIRE(p.units.size() == 2);
        CHECK(p.units[0].file_id == "app.c");
        CHECK(p.units[1].file_id == "hal.c");
        CHECK(p.hal_unit().file_id == "hal.c");
    }
}

TEST_SUITE("symbols") {
    TEST_CASE("definition and call") {
        const auto p = two_units("void main2(void) { set_io_mode(0x40020000, 0x20, 1); }\n", kSetIoMode);
        const auto t = build_symbol_table(p);
        REQUIRE(t.definitions.count("set_io_mode"));
        CHECK(t.definitions.at("set_io_mode").kind == DefinitionKind::Function);
        REQUIRE(t.definitions.at("set_io_mode").signature);
        CHECK(t.definitions.at("set_io_mode").signature->param_types.size() == 3);
        REQUIRE(t.references.count("set_io_mode"));
        CHECK(t.references.at("set_io_mode").size() == 1);
        CHECK(t.references.at("set_io_mode")[0].site == SiteKind::Call);
    }

    TEST_CASE("empty project") {
        const auto t = build_symbol_table(make_project({{"hal.c", ""}}, "hal.c"));
        CHECK(t.definitions.empty());
        CHECK(t.references.empty());
    }

    TEST_CASE("locals and parameters are not references") {
        const auto t = build_symbol_table(two_units("", kSetIoMode));
        for (const char* local : {"mode", "gpio_base", "pin_mask", "pin_number", "GPIO_MODER"}) {
            CHECK_MESSAGE(!t.references.count(local), local);
        }
        CHECK(t.references.empty());
    }

    TEST_CASE("block scope ends at the closing brace") {
        const auto t = build_symbol_table(two_units(
            "uint32_t f(void) { if (1) { uint32_t k = 1; } return k; }\n", ""));
        REQUIRE(t.references.count("k"));
        CHECK(t.references.at("k").size() == 1);
    }

    TEST_CASE("duplicate definitions") {
        try {
            build_symbol_table(two_units("#define A 1\n", "#define A 2\n"));
            FAIL("expected DuplicateDefinition");
        } catch (const DuplicateDefinition& e) {
            CHECK(e.name() == "A");
            CHECK(e.spans().size() == 2);
        }
    }

    TEST_CASE("global and constant kinds") {
        const auto t = build_symbol_table(two_units("uint32_t g = 0;\n", "#define C 0x1\n"));
        CHECK(t.definitions.at("g").kind == DefinitionKind::Global);
        CHECK(t.definitions.at("C").kind == DefinitionKind::Constant);
    }
}

TEST_SUITE("detect_missing") {
    TEST_CASE("two missing functions from the application") {
        const auto t = build_symbol_table(
            two_units("void app(void) { enable_clock(); uint32_t v = gpio_read_pin(0x1); }\n", ""));
        const auto m = detect_missing(t);
        REQUIRE(m.size() == 2);
        CHECK(m[0].name == "enable_clock");
        CHECK(m[0].kind == ElementKind::Function);
        CHECK(m[0].arity == 0);
        CHECK_FALSE(m[0].value_consumed);
        CHECK(m[1].name == "gpio_read_pin");
        CHECK(m[1].kind == ElementKind::Function);
        CHECK(m[1].value_consumed);
        CHECK(m[1].sample_args == std::vector<std::string>{"0x1"});
    }

    TEST_CASE("closed demo") { CHECK(detect_missing(build_symbol_table(test::demo_project())).empty()); }

    TEST_CASE("function and constant from one call") {
        const auto t = build_symbol_table(two_units("void app(void) { hal_gpio_write(GPIOD_BASE, 0x1000, 1); }\n", ""));
        const auto m = detect_missing(t);
        REQUIRE(m.size() == 2);
        CHECK(m[0].name == "hal_gpio_write");
        CHECK(m[0].kind == ElementKind::Function);
        CHECK(m[0].arity == 3);
        CHECK(m[0].sample_args == std::vector<std::string>{"GPIOD_BASE", "0x1000", "1"});
        CHECK(m[1].name == "GPIOD_BASE");
        CHECK(m[1].kind == ElementKind::Constant);
        CHECK(m[1].value_consumed);
    }

    TEST_CASE("conflicting arity") {
        const auto t = build_symbol_table(two_units("void app(void) { f(1); f(1, 2); }\n", ""));
        CHECK_THROWS_AS(detect_missing(t), ConflictingArity);
    }

    TEST_CASE("first reference location") {
        const auto p = load_project_dir(test::demo_dir());
        const auto m = detect_missing(build_symbol_table(delete_element(p, "hal_gpio_read")));
        REQUIRE(m.size() == 1);
        CHECK(m[0].name == "hal_gpio_read");
        CHECK(m[0].arity == 2);
        CHECK(m[0].first_ref_span.file_id == "app.c");
        CHECK(m[0].value_consumed);
    }

    TEST_CASE("deleting one fixture definition reports exactly that name") {
        const Project pristine = test::demo_project();
        for (const auto& item : pristine.hal_unit().items) {
            if (!item.is_definition()) continue;
            CAPTURE(item.name());
            const auto m = detect_missing(build_symbol_table(delete_element(pristine, item.name())));
            CHECK(names(m) == std::vector<std::string>{item.name()});
            for (const auto& e : m) CHECK(build_symbol_table(delete_element(pristine, item.name())).definitions.count(e.name) == 0);
        }
    }

    TEST_CASE("whole-HAL deletion surfaces the application's direct dependencies") {
        const auto [stripped, deleted] = delete_all_hal(test::demo_project());
        CHECK(deleted.size() == 12);
        const auto m = detect_missing(build_symbol_table(stripped));
        // report() precedes main() in app.c, so the transmit helper comes first.
        CHECK(names(m) == std::vector<std::string>{"usart_send_byte", "enable_gpioa_clk", "set_io_mode", "hal_gpio_write",
                                                   "hal_gpio_toggle", "hal_gpio_read"});
    }

    TEST_CASE("determinism") {
        const auto p = delete_all_hal(test::demo_project()).first;
        const auto a = detect_missing(build_symbol_table(p));
        const auto b = detect_missing(build_symbol_table(p));
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(a[i].name == b[i].name);
            CHECK(a[i].first_ref_span.location() == b[i].first_ref_span.location());
        }
    }
}

TEST_SUITE("infer_signature") {
    TEST_CASE("set_io_mode call site") {
        MissingElement e{"set_io_mode", ElementKind::Function, 3, {"GPIOA_BASE", "0x20", "1"}, false, {}};
        const Signature s = infer_signature(e);
        REQUIRE(s.param_types.size() == 3);
        CHECK(s.param_types[0].base == ast::BaseType::U32);
        CHECK(s.param_types[1].base == ast::BaseType::U32);
        CHECK(s.param_types[2].base == ast::BaseType::U8);
        CHECK(s.return_type.base == ast::BaseType::Void);
    }

    TEST_CASE("consumed result returns u32") {
        MissingElement e{"hal_gpio_read", ElementKind::Function, 2, {"GPIOA_BASE", "0x1"}, true, {}};
        CHECK(infer_signature(e).return_type.base == ast::BaseType::U32);
    }

    TEST_CASE("zero arity") {
        MissingElement e{"enable_gpioa_clk", ElementKind::Function, 0, {}, false, {}};
        const Signature s = infer_signature(e);
        CHECK(s.param_types.empty());
        CHECK(s.return_type.base == ast::BaseType::Void);
    }

    TEST_CASE("large decimal stays u32") {
        MissingElement e{"f", ElementKind::Function, 2, {"256", "255"}, false, {}};
        const Signature s = infer_signature(e);
        CHECK(s.param_types[0].base == ast::BaseType::U32);
        CHECK(s.param_types[1].base == ast::BaseType::U8);
    }
}

TEST_SUITE("similarity") {
    TEST_CASE("identical and renamed") {
        CHECK(token_similarity(kSetIoMode, kSetIoMode) == 1.0);
        CHECK(token_similarity("x=1;", "longer_name = 0xFF ;") == 1.0);
        CHECK(token_similarity("", "") == 1.0);
        CHECK(token_similarity("x", "") == 0.0);
    }

    TEST_CASE("while versus for matches the table oracle") {
        const auto a = normalize_tokens(kSetIoMode);
        const auto b = normalize_tokens(kSetIoModeFor);
        const double expected =
            1.0 - static_cast<double>(edit_distance_table(a, b)) / static_cast<double>(std::max(a.size(), b.size()));
        CHECK(token_similarity(kSetIoMode, kSetIoModeFor) == doctest::Approx(expected).epsilon(1e-12));
        CHECK(token_similarity(kSetIoMode, kSetIoModeFor) < 1.0);
    }

    TEST_CASE("levenshtein agrees with the table on random sequences") {
        std::mt19937_64 rng(11);
        const std::vector<std::string> alphabet{"ID", "LIT", "(", ")", ";", "=", "+"};
        for (int round = 0; round < 300; ++round) {
            std::vector<std::string> a(rng() % 12), b(rng() % 12);
            for (auto& s : a) s = alphabet[rng() % alphabet.size()];
            for (auto& s : b) s = alphabet[rng() % alphabet.size()];
            CHECK(levenshtein(a, b) == edit_distance_table(a, b));
        }
    }

    TEST_CASE("symmetric and bounded") {
        const auto sources = read_sources_dir(test::kb_dir());
        for (const auto& [na, a] : sources) {
            for (const auto& [nb, b] : sources) {
                const double ab = token_similarity(a, b);
                CHECK(ab == token_similarity(b, a));
                CHECK(ab >= 0.0);
                CHECK(ab <= 1.0);
            }
        }
    }

    TEST_CASE("lex errors propagate") { CHECK_THROWS_AS(token_similarity("0x", "x"), LexError); }
}
