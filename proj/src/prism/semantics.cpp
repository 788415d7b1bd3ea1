#include <cmath>

#include "flycheck/prism/model.hpp"

namespace flycheck::prism {

namespace {

struct Branch {
    double prob;
    const CompiledUpdate* update;
};

// Evaluated update distribution of one command in state `s`.
std::vector<Branch> distribution(const CompiledCommand& c, std::span<const std::int32_t> s) {
    std::vector<Branch> out;
    out.reserve(c.updates.size());
    double total = 0.0;
    for (const auto& u : c.updates) {
        const double p = u.probability.eval(s).as_double();
        if (!(p > 0.0 && p <= 1.0)) {
            throw ModelEvaluationError("update probability " + std::to_string(p) + " of " + c.describe() +
                                       " outside (0,1]");
        }
        total += p;
        out.push_back({p, &u});
    }
    if (std::abs(total - 1.0) > kDistributionTolerance) {
        throw ModelEvaluationError("update probabilities of " + c.describe() + " sum to " + std::to_string(total));
    }
    return out;
}

class Successors {
public:
    Successors(const ElaboratedModel& m, const StateValuation& s) : model_(m), state_(s) {}

    // Adds the joint distribution of `cmds` (one command per participating module), scaled by `weight`.
    void add(const std::vector<const CompiledCommand*>& cmds, double weight) {
        std::vector<std::vector<Branch>> dists;
        dists.reserve(cmds.size());
        for (const auto* c : cmds) dists.push_back(distribution(*c, state_.values()));
        std::vector<std::int32_t> values(state_.values().begin(), state_.values().end());
        expand(cmds, dists, 0, weight, values);
    }

    std::vector<Transition> take() { return std::move(raw_); }

private:
    void expand(const std::vector<const CompiledCommand*>& cmds, const std::vector<std::vector<Branch>>& dists,
                std::size_t depth, double prob, std::vector<std::int32_t>& values) {
        if (depth == cmds.size()) {
            raw_.push_back({StateValuation(model_.layout, values), prob});
            return;
        }
        const auto& layout = *model_.layout;
        for (const auto& b : dists[depth]) {
            std::vector<std::int32_t> next = values;
            for (const auto& a : b.update->assignments) {
                // Right-hand sides read the source state, not partially updated values.
                const std::int64_t v = a.value.eval(state_.values()).i;
                const auto& decl = layout[a.var];
                if (v < decl.lower || v > decl.upper) {
                    throw ModelEvaluationError(cmds[depth]->describe() + " sets " + decl.name + " to " +
                                               std::to_string(v) + " outside [" + std::to_string(decl.lower) + ".." +
                                               std::to_string(decl.upper) + "] in state " + state_.to_string());
                }
                next[a.var] = static_cast<std::int32_t>(v);
            }
            expand(cmds, dists, depth + 1, prob * b.prob, next);
        }
    }

    const ElaboratedModel& model_;
    const StateValuation& state_;
    std::vector<Transition> raw_;
};

bool enabled(const CompiledCommand& c, std::span<const std::int32_t> s) { return c.guard.eval(s).i != 0; }

}  // namespace

PrismSemantics::PrismSemantics(ElaboratedModel model) : model_(std::move(model)) {}

TransitionList PrismSemantics::next(const StateValuation& s) const {
    const auto values = s.values();

    // Enabled command instances: single local commands and one enabled command per module of a sync group.
    std::vector<std::vector<const CompiledCommand*>> instances;
    for (const auto& c : model_.local_commands) {
        if (enabled(c, values)) instances.push_back({&c});
    }
    for (const auto& g : model_.sync_groups) {
        std::vector<std::vector<const CompiledCommand*>> partial{{}};
        for (const auto& module_cmds : g.modules) {
            std::vector<const CompiledCommand*> on;
            for (const auto& c : module_cmds) {
                if (enabled(c, values)) on.push_back(&c);
            }
            std::vector<std::vector<const CompiledCommand*>> grown;
            for (const auto& p : partial) {
                for (const auto* c : on) {
                    grown.push_back(p);
                    grown.back().push_back(c);
                }
            }
            partial = std::move(grown);
            if (partial.empty()) break;
        }
        for (auto& p : partial) instances.push_back(std::move(p));
    }

    if (instances.empty()) return make_transition_list({{s, 1.0}}, true);

    Successors succ(model_, s);
    const double weight = 1.0 / static_cast<double>(instances.size());
    for (const auto& inst : instances) succ.add(inst, weight);
    return make_transition_list(succ.take());
}

bool PrismSemantics::lab_eval(const StateValuation& s, const AtomId& a) const {
    if (a.predicate) {
        auto idx = model_.layout->index_of(a.predicate->variable);
        if (!idx) throw UnknownLabelError(a.name);
        return compare(s[*idx], a.predicate->op, a.predicate->value);
    }
    auto it = model_.labels.find(a.name);
    if (it == model_.labels.end()) throw UnknownLabelError(a.name);
    return it->second.eval(s.values()).i != 0;
}

bool PrismSemantics::has_atom(const AtomId& a) const {
    if (a.predicate) return model_.layout->index_of(a.predicate->variable).has_value();
    return model_.labels.contains(a.name);
}

std::vector<AtomId> PrismSemantics::atoms() const {
    std::vector<AtomId> out;
    for (const auto& [name, expr] : model_.labels) out.push_back(AtomId::label(name));
    return out;
}

std::shared_ptr<const PrismSemantics> build_semantics(ElaboratedModel model) {
    return std::make_shared<const PrismSemantics>(std::move(model));
}

std::shared_ptr<const PrismSemantics> load_model(std::string_view text, const ConstantOverrides& overrides) {
    return build_semantics(elaborate(parse_model(text), overrides));
}

}  // namespace flycheck::prism
