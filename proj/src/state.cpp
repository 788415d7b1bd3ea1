#include "flycheck/state.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "flycheck/errors.hpp"

namespace flycheck {

const char* to_string(ModelErrc code) {
    switch (code) {
        case ModelErrc::unsupported_construct: return "unsupported construct";
        case ModelErrc::duplicate_name: return "duplicate name";
        case ModelErrc::unresolved_constant: return "unresolved constant";
        case ModelErrc::undefined_identifier: return "undefined identifier";
        case ModelErrc::type_mismatch: return "type mismatch";
        case ModelErrc::probability_sum: return "probability sum";
        case ModelErrc::invalid_probability: return "invalid probability";
        case ModelErrc::init_out_of_bounds: return "initial value out of bounds";
        case ModelErrc::invalid_bounds: return "invalid bounds";
        case ModelErrc::cyclic_definition: return "cyclic definition";
        case ModelErrc::bad_override: return "bad constant override";
    }
    return "model error";
}

VariableLayout::VariableLayout(std::vector<VariableDecl> decls) : decls_(std::move(decls)) {
    std::sort(decls_.begin(), decls_.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
    for (std::size_t i = 0; i < decls_.size(); ++i) {
        const auto& d = decls_[i];
        if (i > 0 && decls_[i - 1].name == d.name) {
            throw std::invalid_argument("duplicate variable '" + d.name + "'");
        }
        if (d.lower > d.upper) {
            throw std::invalid_argument("empty range for variable '" + d.name + "'");
        }
        const auto range = static_cast<std::uint64_t>(static_cast<std::int64_t>(d.upper) - d.lower);
        const std::uint8_t width = range <= 0xFF ? 1 : range <= 0xFFFF ? 2 : 4;
        widths_.push_back(width);
        key_size_ += width;
    }
}

std::optional<std::size_t> VariableLayout::index_of(std::string_view name) const {
    auto it = std::lower_bound(decls_.begin(), decls_.end(), name,
                               [](const VariableDecl& d, std::string_view n) { return d.name < n; });
    if (it == decls_.end() || it->name != name) return std::nullopt;
    return static_cast<std::size_t>(it - decls_.begin());
}

StateValuation::StateValuation(LayoutPtr layout, std::vector<std::int32_t> values)
    : layout_(std::move(layout)), values_(std::move(values)) {
    if (values_.size() != layout_->size()) {
        throw ModelEvaluationError("valuation has " + std::to_string(values_.size()) + " values, layout declares " +
                                   std::to_string(layout_->size()));
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        const auto& d = (*layout_)[i];
        if (values_[i] < d.lower || values_[i] > d.upper) {
            throw ModelEvaluationError("value " + std::to_string(values_[i]) + " of variable '" + d.name +
                                       "' outside [" + std::to_string(d.lower) + ".." + std::to_string(d.upper) + "]");
        }
    }
}

std::int32_t StateValuation::value(std::string_view name) const {
    auto idx = layout_->index_of(name);
    if (!idx) throw std::out_of_range("no variable '" + std::string(name) + "'");
    return values_[*idx];
}

std::vector<std::pair<std::string, std::int32_t>> StateValuation::entries() const {
    std::vector<std::pair<std::string, std::int32_t>> out;
    out.reserve(values_.size());
    for (std::size_t i = 0; i < values_.size(); ++i) out.emplace_back((*layout_)[i].name, values_[i]);
    return out;
}

std::string StateValuation::to_string() const {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < values_.size(); ++i) {
        const auto& d = (*layout_)[i];
        if (i) os << ',';
        os << d.name << '=';
        if (d.is_bool) {
            os << (values_[i] ? "true" : "false");
        } else {
            os << values_[i];
        }
    }
    os << ')';
    return os.str();
}

StateKey canonical_key(const StateValuation& s) {
    const auto& layout = s.layout();
    std::string bytes;
    bytes.reserve(layout.key_size());
    for (std::size_t i = 0; i < layout.size(); ++i) {
        // Offsets from the lower bound, big-endian, so byte order equals value order.
        auto offset = static_cast<std::uint32_t>(static_cast<std::int64_t>(s[i]) - layout[i].lower);
        for (std::size_t b = layout.key_width(i); b-- > 0;) {
            bytes.push_back(static_cast<char>((offset >> (8 * b)) & 0xFF));
        }
    }
    return StateKey(std::move(bytes));
}

StateValuation decode_key(const LayoutPtr& layout, const StateKey& key) {
    const auto& bytes = key.bytes();
    if (bytes.size() != layout->key_size()) throw std::invalid_argument("state key does not match layout");
    std::vector<std::int32_t> values;
    values.reserve(layout->size());
    std::size_t pos = 0;
    for (std::size_t i = 0; i < layout->size(); ++i) {
        std::uint32_t offset = 0;
        for (std::size_t b = 0; b < layout->key_width(i); ++b) {
            offset = (offset << 8) | static_cast<unsigned char>(bytes[pos++]);
        }
        values.push_back(static_cast<std::int32_t>(static_cast<std::int64_t>((*layout)[i].lower) + offset));
    }
    return StateValuation(layout, std::move(values));
}

const char* to_string(Comparison op) {
    switch (op) {
        case Comparison::eq: return "=";
        case Comparison::ne: return "!=";
        case Comparison::lt: return "<";
        case Comparison::le: return "<=";
        case Comparison::gt: return ">";
        case Comparison::ge: return ">=";
    }
    return "?";
}

bool compare(std::int64_t lhs, Comparison op, std::int64_t rhs) {
    switch (op) {
        case Comparison::eq: return lhs == rhs;
        case Comparison::ne: return lhs != rhs;
        case Comparison::lt: return lhs < rhs;
        case Comparison::le: return lhs <= rhs;
        case Comparison::gt: return lhs > rhs;
        case Comparison::ge: return lhs >= rhs;
    }
    return false;
}

AtomId AtomId::inline_predicate(InlinePredicate p) {
    std::string name = p.variable + to_string(p.op);
    if (p.boolean_literal) {
        name += p.value ? "true" : "false";
    } else {
        name += std::to_string(p.value);
    }
    return AtomId{std::move(name), std::move(p)};
}

TransitionList make_transition_list(std::vector<Transition> raw, bool deadlock) {
    if (raw.empty()) throw ModelEvaluationError("empty successor distribution");

    std::vector<std::pair<StateKey, std::size_t>> keyed;
    keyed.reserve(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) keyed.emplace_back(canonical_key(raw[i].target), i);
    std::stable_sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });

    TransitionList out;
    out.deadlock = deadlock;
    out.items.reserve(raw.size());
    double total = 0.0;
    for (std::size_t i = 0; i < keyed.size(); ++i) {
        auto& t = raw[keyed[i].second];
        if (!(t.prob > 0.0) || !std::isfinite(t.prob)) {
            throw ModelEvaluationError("non-positive transition probability " + std::to_string(t.prob) + " to " +
                                       t.target.to_string());
        }
        total += t.prob;
        if (i > 0 && keyed[i].first == keyed[i - 1].first) {
            out.items.back().prob += t.prob;
        } else {
            out.items.push_back(std::move(t));
        }
    }
    if (std::abs(total - 1.0) > kDistributionTolerance) {
        throw ModelEvaluationError("successor probabilities sum to " + std::to_string(total));
    }
    return out;
}

}  // namespace flycheck
