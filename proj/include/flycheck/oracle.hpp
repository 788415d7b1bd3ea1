#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "flycheck/pctl.hpp"
#include "flycheck/state.hpp"
#include "flycheck/table_semantics.hpp"

namespace flycheck {

using SatSet = std::vector<bool>;

/// Fully enumerated reachable state space. State 0 is the initial state;
/// indices follow breadth-first discovery order.
struct ExplicitDtmc {
    std::shared_ptr<const ModelSemantics> model;
    std::vector<StateValuation> states;
    std::vector<std::vector<std::pair<std::uint32_t, double>>> rows;
    /// Declared labels, evaluated on every state.
    std::map<std::string, SatSet> labels;
    std::size_t deadlocks = 0;

    std::size_t size() const { return states.size(); }
    std::optional<std::uint32_t> index_of(const StateValuation& s) const;

    std::unordered_map<StateKey, std::uint32_t> index;
};

/// Breadth-first enumeration from the initial state. Throws ResourceError
/// when more than `cap` states are reachable.
ExplicitDtmc enumerate(std::shared_ptr<const ModelSemantics> model, std::size_t cap = 10'000'000);

/// Satisfaction set of a desugared state formula. P=? is rejected.
SatSet oracle_check(const ExplicitDtmc& d, const pctl::StateFormula& f);

/// Per-state probability of a desugared path formula.
std::vector<double> oracle_path(const ExplicitDtmc& d, const pctl::PathFormula& phi);

std::vector<double> oracle_next(const ExplicitDtmc& d, const SatSet& sat);
std::vector<double> oracle_bounded_until(const ExplicitDtmc& d, const SatSet& sat1, const SatSet& sat2, std::uint32_t k);
std::vector<double> oracle_unbounded_until(const ExplicitDtmc& d, const SatSet& sat1, const SatSet& sat2);

/// States with probability 0 / exactly 1 of satisfying `sat1 U sat2`.
SatSet prob0(const ExplicitDtmc& d, const SatSet& sat1, const SatSet& sat2);
SatSet prob1(const ExplicitDtmc& d, const SatSet& sat1, const SatSet& sat2);

/// Same contract as Engine::evaluate, at state `state`.
pctl::Evaluation oracle_evaluate(const ExplicitDtmc& d, std::uint32_t state, const pctl::StatePtr& f,
                                 double bound_tolerance = 0.0);

/// `src dst prob` per line.
void export_transitions(const ExplicitDtmc& d, std::ostream& os);
/// `state atom` per line for every declared label holding in the state.
void export_labels(const ExplicitDtmc& d, std::ostream& os);

/// Reproducible random chain over states 0..n-1 with 1..d distinct successors
/// per state and atoms `a0`..`a{atoms-1}` each holding with probability 1/2.
std::shared_ptr<const TableSemantics> random_dtmc(std::uint64_t seed, std::uint32_t n, std::uint32_t d,
                                                  std::uint32_t atoms);

}  // namespace flycheck
