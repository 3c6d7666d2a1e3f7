/*
 * Copyright (c) 2026 halgen contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */
#include "halgen/prompting/prompt.hpp"

#include <fstream>
#include <map>
#include <optional>
#include <regex>
#include <set>
#include <sstream>

#include "halgen/error.hpp"

namespace halgen {
namespace {

const std::set<std::string, std::less<>> kPlaceholders = {"function_name", "length_parameters", "sample_parameters",
                                                          "context"};

const std::regex& placeholder_pattern() {
    static const std::regex re(R"(\{([A-Za-z_][A-Za-z0-9_]*)\})");
    return re;
}

void check_placeholders(const std::string& section, const std::string& text) {
    for (std::sregex_iterator it(text.begin(), text.end(), placeholder_pattern()), end; it != end; ++it) {
        if (!kPlaceholders.count((*it)[1].str())) {
            throw TemplateError("unknown placeholder {" + (*it)[1].str() + "} in section '" + section + "'");
        }
    }
}

std::string substitute(const std::string& text, const std::map<std::string, std::string, std::less<>>& values) {
    std::string out;
    std::size_t last = 0;
    for (std::sregex_iterator it(text.begin(), text.end(), placeholder_pattern()), end; it != end; ++it) {
        const auto& m = *it;
        out.append(text, last, static_cast<std::size_t>(m.position(0)) - last);
        auto v = values.find(m[1].str());
        out += v != values.end() ? v->second : m[0].str();
        last = static_cast<std::size_t>(m.position(0) + m.length(0));
    }
    out.append(text, last);
    return out;
}

std::string trim_blank_lines(const std::string& s) {
    const auto first = s.find_first_not_of("\n\r");
    if (first == std::string::npos) return "";
    auto last = s.find_last_not_of("\n\r \t");
    return s.substr(first, last - first + 1);
}

}  // namespace

const std::string& RenderedPrompt::section(std::string_view name) const {
    for (const auto& [n, text] : sections) {
        if (n == name) return text;
    }
    throw Error("prompt has no section '" + std::string(name) + "'");
}

PromptTemplate default_template() {
    PromptTemplate t;
    t.cue = "You will be my Custom Hardware Abstraction Layer Generator.";
    t.instructions =
        "Please generate a custom C function implementation for the function '{function_name}' with "
        "{length_parameters} parameters like: {sample_parameters}.";
    t.constant_instructions = "Please generate a `#define` constant definition for '{function_name}'.";
    t.constraints =
        "Don'ts:\n"
        "- Don't reference new variables or functions that are not implemented.\n"
        "- Don't reference stm32fxxx_hal.h functions.\n"
        "- Don't use structs, typedefs, arrays, strings, switch statements or function-like macros.\n"
        "- Don't emit function prototypes or more than one definition.";
    t.return_format =
        "Return-Format:\n"
        "- Return exactly one definition inside a single ```c fenced code block.\n"
        "- Be well-documented with comments explaining its purpose, parameters, and return value.\n"
        "- Create your own custom HAL functions without referencing other functions.\n"
        "- Access registers through volatile uint32_t pointers computed as base address plus offset.";
    t.context_frame =
        "Create the {function_name} using the provided information about the existing code for an STM32F407 "
        "board: {context}";
    return t;
}

PromptTemplate parse_template(std::string_view text) {
    static const std::regex header(R"(^\[([A-Za-z_]+)\]\s*$)");
    std::map<std::string, std::string, std::less<>> sections;
    std::optional<std::string> current;
    std::istringstream in{std::string(text)};
    for (std::string line; std::getline(in, line);) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::smatch m;
        if (std::regex_match(line, m, header)) {
            current = m[1].str();
            if (sections.count(*current)) throw TemplateError("section [" + *current + "] appears twice");
            sections[*current];
            continue;
        }
        if (!current) {
            if (line.find_first_not_of(" \t") != std::string::npos) {
                throw TemplateError("text before the first section header");
            }
            continue;
        }
        sections[*current] += line + "\n";
    }

    PromptTemplate t = default_template();
    const std::map<std::string, std::string PromptTemplate::*, std::less<>> fields = {
        {"cue", &PromptTemplate::cue},
        {"instructions", &PromptTemplate::instructions},
        {"constant_instructions", &PromptTemplate::constant_instructions},
        {"constraints", &PromptTemplate::constraints},
        {"return_format", &PromptTemplate::return_format},
        {"context_frame", &PromptTemplate::context_frame},
    };
    for (const auto& [name, body] : sections) {
        auto f = fields.find(name);
        if (f == fields.end()) throw TemplateError("unknown template section [" + name + "]");
        const std::string value = trim_blank_lines(body);
        if (value.empty()) throw TemplateError("template section [" + name + "] is empty");
        check_placeholders(name, value);
        t.*(f->second) = value;
    }
    for (const char* required : {"cue", "instructions", "constraints", "return_format", "context_frame"}) {
        if (!sections.count(required)) throw TemplateError(std::string("template is missing section [") + required + "]");
    }
    return t;
}

PromptTemplate load_template(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot read template " + path.string());
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_template(ss.str());
}

RenderedPrompt build_prompt(const MissingElement& element, const Signature& signature,
                            const std::vector<Snippet>& retrieved, const PromptTemplate& tmpl) {
    if (element.kind == ElementKind::Function &&
        (signature.param_types.size() != element.arity || element.sample_args.size() != element.arity)) {
        throw Error("signature of '" + element.name + "' does not match its arity");
    }
    std::string sample;
    for (std::size_t i = 0; i < element.sample_args.size(); ++i) {
        if (i) sample += ", ";
        sample += element.sample_args[i];
    }
    std::string context;
    for (std::size_t i = 0; i < retrieved.size(); ++i) {
        if (i) context += kContextSeparator;
        std::string text = retrieved[i].text;
        while (!text.empty() && text.back() == '\n') text.pop_back();
        context += text;
    }
    if (context.empty()) context = kNoContext;

    const std::map<std::string, std::string, std::less<>> values = {
        {"function_name", element.name},
        {"length_parameters", std::to_string(element.arity)},
        {"sample_parameters", sample},
        {"context", context},
    };
    const std::string& instructions =
        element.kind == ElementKind::Constant ? tmpl.constant_instructions : tmpl.instructions;
    check_placeholders("cue", tmpl.cue);
    check_placeholders("instructions", instructions);
    check_placeholders("constraints", tmpl.constraints);
    check_placeholders("return_format", tmpl.return_format);
    check_placeholders("context_frame", tmpl.context_frame);

    RenderedPrompt out;
    out.sections = {
        {"Cue", substitute(tmpl.cue, values)},
        {"Instructions", substitute(instructions, values)},
        {"Constraints", substitute(tmpl.constraints, values)},
        {"ReturnFormat", substitute(tmpl.return_format, values)},
        {"Context", substitute(tmpl.context_frame, values)},
    };
    for (const auto& [name, text] : out.sections) {
        if (text.empty()) throw TemplateError("section " + name + " rendered empty");
        for (const auto& p : kPlaceholders) {
            // Only template text is checked; retrieved code may legitimately contain braces.
            if (name != "Context" && text.find("{" + p + "}") != std::string::npos) {
                throw TemplateError("placeholder {" + p + "} survived in section " + name);
            }
        }
        if (!out.flattened.empty()) out.flattened += "\n\n";
        out.flattened += text;
    }
    return out;
}

}  // namespace halgen
