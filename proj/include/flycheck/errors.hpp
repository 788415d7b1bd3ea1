#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace flycheck {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Position in a source text, 1-based.
struct SourcePos {
    std::size_t line = 1;
    std::size_t column = 1;
};

/// Lexical or syntactic error in a model or property text.
class SyntaxError : public Error {
public:
    SyntaxError(const std::string& what, SourcePos pos)
        : Error(std::to_string(pos.line) + ":" + std::to_string(pos.column) + ": " + what), pos_(pos) {}

    SourcePos pos() const { return pos_; }

private:
    SourcePos pos_;
};

/// Categories of static model errors. Tests and the CLI dispatch on these.
enum class ModelErrc {
    unsupported_construct,
    duplicate_name,
    unresolved_constant,
    undefined_identifier,
    type_mismatch,
    probability_sum,
    invalid_probability,
    init_out_of_bounds,
    invalid_bounds,
    cyclic_definition,
    bad_override,
};

const char* to_string(ModelErrc code);

/// Static error found while parsing or elaborating a model.
class ModelError : public Error {
public:
    ModelError(ModelErrc code, const std::string& what)
        : Error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ModelErrc code() const { return code_; }

private:
    ModelErrc code_;
};

/// Failure while evaluating the successor distribution of a concrete state.
class ModelEvaluationError : public Error {
public:
    using Error::Error;
};

/// Atomic proposition not known to the model.
class UnknownLabelError : public Error {
public:
    explicit UnknownLabelError(const std::string& label) : Error("unknown label \"" + label + "\""), label_(label) {}

    const std::string& label() const { return label_; }

private:
    std::string label_;
};

/// A configured resource limit (state cap, iteration cap) was exceeded.
class ResourceError : public Error {
public:
    using Error::Error;
};

}  // namespace flycheck
