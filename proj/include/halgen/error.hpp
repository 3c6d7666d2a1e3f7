/*
 * Copyright (c) 2026 halgen contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "halgen/c_ast/source_span.hpp"

namespace halgen {

/// Root of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An error anchored at a source location.
class SourceError : public Error {
public:
    SourceError(const std::string& kind, SourceSpan span, const std::string& message)
        : Error(span.location() + ": " + kind + ": " + message), span_(std::move(span)), detail_(message) {}

    const SourceSpan& span() const noexcept { return span_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    SourceSpan span_;
    std::string detail_;
};

class LexError : public SourceError {
public:
    LexError(SourceSpan span, const std::string& message) : SourceError("lex error", std::move(span), message) {}
};

class ParseError : public SourceError {
public:
    ParseError(SourceSpan span, const std::string& message) : SourceError("parse error", std::move(span), message) {}
};

class DuplicateDefinition : public Error {
public:
    DuplicateDefinition(std::string name, std::vector<SourceSpan> spans)
        : Error("duplicate definition of '" + name + "' at " + spans.front().location() + " and " +
                spans.back().location()),
          name_(std::move(name)), spans_(std::move(spans)) {}

    const std::string& name() const noexcept { return name_; }
    const std::vector<SourceSpan>& spans() const noexcept { return spans_; }

private:
    std::string name_;
    std::vector<SourceSpan> spans_;
};

class ConflictingArity : public Error {
public:
    explicit ConflictingArity(std::string name)
        : Error("call sites of '" + name + "' disagree on arity"), name_(std::move(name)) {}

    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

class IoError : public Error {
public:
    using Error::Error;
};

class FormatError : public Error {
public:
    using Error::Error;
};

/// Invalid configuration; the message is prefixed with the offending field path.
class ConfigError : public Error {
public:
    ConfigError(const std::string& field_path, const std::string& message)
        : Error(field_path + ": " + message), field_path_(field_path) {}

    const std::string& field_path() const noexcept { return field_path_; }

private:
    std::string field_path_;
};

class TemplateError : public Error {
public:
    using Error::Error;
};

class EmptyIndex : public Error {
public:
    EmptyIndex() : Error("search on an empty vector index") {}
};

class EmptyGeneration : public Error {
public:
    EmptyGeneration() : Error("backend returned an empty generation") {}
};

class SimSetupError : public Error {
public:
    using Error::Error;
};

class NotFound : public Error {
public:
    using Error::Error;
};

class NotInHalUnit : public Error {
public:
    using Error::Error;
};

/// Broken internal invariant, e.g. a vetted patch that no longer parses after merging.
class InternalError : public Error {
public:
    using Error::Error;
};

}  // namespace halgen
