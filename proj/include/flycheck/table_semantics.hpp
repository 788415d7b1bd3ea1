#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "flycheck/state.hpp"

namespace flycheck {

/// Explicit Markov chain given as a transition table over states 0..n-1.
///
/// States are valuations of a single variable `s`; labels are sets of state
/// indices. Used for random models and hand-built fixtures.
class TableSemantics final : public ModelSemantics {
public:
    using Row = std::vector<std::pair<std::uint32_t, double>>;

    /// Rows must be non-empty distributions over valid indices.
    TableSemantics(std::vector<Row> rows, std::map<std::string, std::vector<bool>> labels, std::uint32_t initial = 0);

    std::size_t num_states() const { return rows_.size(); }
    const std::vector<Row>& rows() const { return rows_; }

    StateValuation state(std::uint32_t index) const;
    std::uint32_t index(const StateValuation& s) const { return static_cast<std::uint32_t>(s[0]); }

    const LayoutPtr& layout() const override { return layout_; }
    StateValuation initial_state() const override { return state(initial_); }
    TransitionList next(const StateValuation& s) const override;
    bool lab_eval(const StateValuation& s, const AtomId& a) const override;
    bool has_atom(const AtomId& a) const override;
    std::vector<AtomId> atoms() const override;

private:
    LayoutPtr layout_;
    std::vector<Row> rows_;
    std::map<std::string, std::vector<bool>> labels_;
    std::uint32_t initial_;
};

}  // namespace flycheck
