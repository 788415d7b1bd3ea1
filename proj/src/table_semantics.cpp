#include "flycheck/table_semantics.hpp"

#include <stdexcept>

#include "flycheck/errors.hpp"

namespace flycheck {

TableSemantics::TableSemantics(std::vector<Row> rows, std::map<std::string, std::vector<bool>> labels,
                               std::uint32_t initial)
    : rows_(std::move(rows)), labels_(std::move(labels)), initial_(initial) {
    if (rows_.empty()) throw std::invalid_argument("table model needs at least one state");
    if (initial_ >= rows_.size()) throw std::invalid_argument("initial state out of range");
    const auto n = static_cast<std::int32_t>(rows_.size());
    layout_ = std::make_shared<const VariableLayout>(std::vector<VariableDecl>{{"s", 0, n - 1, false}});
    for (const auto& row : rows_) {
        if (row.empty()) throw std::invalid_argument("table model row is empty");
        for (const auto& [dst, p] : row) {
            if (dst >= rows_.size()) throw std::invalid_argument("table model target out of range");
            if (!(p > 0.0)) throw std::invalid_argument("table model probability must be positive");
        }
    }
    for (auto& [name, bits] : labels_) {
        if (bits.size() != rows_.size()) throw std::invalid_argument("label '" + name + "' has wrong size");
    }
}

StateValuation TableSemantics::state(std::uint32_t index) const {
    return StateValuation(layout_, {static_cast<std::int32_t>(index)});
}

TransitionList TableSemantics::next(const StateValuation& s) const {
    std::vector<Transition> raw;
    const auto& row = rows_.at(index(s));
    raw.reserve(row.size());
    for (const auto& [dst, p] : row) raw.push_back({state(dst), p});
    return make_transition_list(std::move(raw));
}

bool TableSemantics::lab_eval(const StateValuation& s, const AtomId& a) const {
    if (a.predicate) {
        if (a.predicate->variable != "s") throw UnknownLabelError(a.name);
        return compare(s[0], a.predicate->op, a.predicate->value);
    }
    auto it = labels_.find(a.name);
    if (it == labels_.end()) throw UnknownLabelError(a.name);
    return it->second[index(s)];
}

bool TableSemantics::has_atom(const AtomId& a) const {
    if (a.predicate) return a.predicate->variable == "s";
    return labels_.contains(a.name);
}

std::vector<AtomId> TableSemantics::atoms() const {
    std::vector<AtomId> out;
    for (const auto& [name, bits] : labels_) out.push_back(AtomId::label(name));
    return out;
}

}  // namespace flycheck
