#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "flycheck/checker.hpp"
#include "flycheck/prism/model.hpp"

namespace flycheck::bench {

enum class EngineKind { onthefly, global };
enum class OutputFormat { text, jsonl };

struct RunConfig {
    std::string model_path;
    std::optional<std::string> props_path;
    std::vector<std::string> inline_props;
    prism::ConstantOverrides overrides;
    double epsilon = 1e-6;
    EngineKind engine = EngineKind::onthefly;
    bool converge_initial_only = false;
    std::size_t state_cap = 10'000'000;
    bool stats = false;
    OutputFormat format = OutputFormat::text;
    double bound_tolerance = 0.0;
    /// Exit with 1 when some property evaluates to false.
    bool fail_on_false = true;
};

/// Throws std::invalid_argument on an inconsistent configuration.
void validate(const RunConfig& config);

struct PropertyReport {
    std::string property;
    std::optional<bool> verdict;  // empty for P=? and on error
    std::optional<double> probability;
    double ms = 0.0;
    std::size_t states = 0;
    std::size_t iterations = 0;
    CheckStats stats;
    std::optional<std::string> error;
};

struct RunReport {
    int exit_code = 0;
    std::vector<PropertyReport> properties;
};

/// Loads the model and properties, checks every property at the initial
/// state and writes one record per property to `out`; diagnostics go to `err`.
/// Exit codes: 0 all good, 1 some property false, 2 errors.
RunReport run(const RunConfig& config, std::ostream& out, std::ostream& err);

std::string to_json_line(const PropertyReport& r);

/// Herman's self-stabilising ring of `n` processes; `n` odd and at least 3.
std::string generate_herman(unsigned n);

}  // namespace flycheck::bench
