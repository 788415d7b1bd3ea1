#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "flycheck/state.hpp"

namespace flycheck::pctl {

struct StateFormula;
struct PathFormula;
using StatePtr = std::shared_ptr<const StateFormula>;
using PathPtr = std::shared_ptr<const PathFormula>;

enum class BoundKind { le, lt, gt, ge, query };

/// Comparison `⋈ p` of a probabilistic operator, or `=?` for a query.
///
/// `complement` is only set on queries produced by rewriting `P=? [G f]`;
/// the reported value is then 1 - Pr(path).
struct ProbBound {
    BoundKind kind = BoundKind::query;
    double p = 0.0;
    bool complement = false;

    bool operator==(const ProbBound&) const = default;
};

/// Applies the comparison, widening the threshold by `tolerance`.
bool satisfies(double probability, const ProbBound& bound, double tolerance = 0.0);

struct True {};
struct False {};
struct Atom {
    AtomId id;
};
struct Not {
    StatePtr arg;
};
struct Or {
    StatePtr lhs, rhs;
};
struct And {
    StatePtr lhs, rhs;
};
struct Implies {
    StatePtr lhs, rhs;
};
struct Prob {
    ProbBound bound;
    PathPtr path;
};

struct StateFormula {
    std::variant<True, False, Atom, Not, Or, And, Implies, Prob> node;
};

struct Next {
    StatePtr arg;
};
struct BoundedUntil {
    StatePtr lhs;
    std::uint32_t k;
    StatePtr rhs;
};
struct Until {
    StatePtr lhs, rhs;
};
struct Eventually {
    std::optional<std::uint32_t> k;
    StatePtr arg;
};
struct Globally {
    std::optional<std::uint32_t> k;
    StatePtr arg;
};

struct PathFormula {
    std::variant<Next, BoundedUntil, Until, Eventually, Globally> node;
};

// Constructors.
StatePtr make_true();
StatePtr make_false();
StatePtr make_atom(AtomId id);
StatePtr make_atom(std::string label);
StatePtr make_not(StatePtr arg);
StatePtr make_or(StatePtr lhs, StatePtr rhs);
StatePtr make_and(StatePtr lhs, StatePtr rhs);
StatePtr make_implies(StatePtr lhs, StatePtr rhs);
StatePtr make_prob(ProbBound bound, PathPtr path);
PathPtr make_next(StatePtr arg);
PathPtr make_bounded_until(StatePtr lhs, std::uint32_t k, StatePtr rhs);
PathPtr make_until(StatePtr lhs, StatePtr rhs);
PathPtr make_eventually(std::optional<std::uint32_t> k, StatePtr arg);
PathPtr make_globally(std::optional<std::uint32_t> k, StatePtr arg);

/// Structural equality.
bool equal(const StateFormula& a, const StateFormula& b);
bool equal(const PathFormula& a, const PathFormula& b);

/// Canonical concrete syntax; parse_property(to_string(f)) rebuilds f.
std::string to_string(const StateFormula& f);
std::string to_string(const PathFormula& f);

/// Rewrites F, G and => into the core grammar (plus And).
StatePtr desugar(const StatePtr& f);

/// True iff `f` uses only true/false/atoms, !, |, & and P over X, U<=k, U.
bool is_core(const StateFormula& f);

/// Distinct atoms occurring in `f`, in first-occurrence order.
std::vector<AtomId> collect_atoms(const StateFormula& f);

struct PropertyQuery {
    std::string source;
    StatePtr formula;
    /// 1-based line in the property file; 0 for inline properties.
    std::size_t line = 0;

    /// True when the root is `P=? [...]`.
    bool is_query() const;
};

/// Outcome of evaluating a property at one state. `probability` is set when
/// the root is a P operator; for P=? the verdict is meaningless.
struct Evaluation {
    bool verdict = false;
    std::optional<double> probability;
};

/// Parses one property and returns its desugared form. Throws SyntaxError.
PropertyQuery parse_property(std::string_view text);

/// Parses without desugaring; used to test the rewriting itself.
StatePtr parse_formula_raw(std::string_view text);

/// One property per line; `//` comments and blank lines are skipped.
std::vector<PropertyQuery> parse_property_file(std::string_view text);

}  // namespace flycheck::pctl
