#include "flycheck/checker.hpp"

#include <stdexcept>
#include <type_traits>

#include "flycheck/errors.hpp"

namespace flycheck {

const char* to_string(RecordLabel l) {
    switch (l) {
        case RecordLabel::yes: return "YES";
        case RecordLabel::no: return "NO";
        case RecordLabel::unknown: return "UNKNOWN";
    }
    return "?";
}

const char* to_string(UntilOutcome o) {
    switch (o) {
        case UntilOutcome::initial_yes: return "initial-yes";
        case UntilOutcome::initial_no: return "initial-no";
        case UntilOutcome::no_yes: return "no-yes-records";
        case UntilOutcome::no_no: return "no-no-records";
        case UntilOutcome::computed: return "computed";
    }
    return "?";
}

Engine::Engine(std::shared_ptr<const ModelSemantics> model, EngineOptions options)
    : model_(std::move(model)), options_(options) {
    if (!model_) throw std::invalid_argument("engine needs a model");
    if (!(options_.epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
    if (options_.state_cap == 0) throw std::invalid_argument("state cap must be positive");
}

void Engine::reset_stats() {
    stats_ = {};
    expanded_.clear();
    deadlocks_.clear();
}

CheckStats Engine::read_stats() const {
    CheckStats out = stats_;
    out.states_expanded = expanded_.size();
    out.deadlocks_patched = deadlocks_.size();
    return out;
}

void Engine::clear_memo() { memo_.clear(); }

std::uint32_t Engine::formula_id(const pctl::StatePtr& f) {
    if (auto it = formula_ids_.find(f.get()); it != formula_ids_.end()) return it->second;
    const auto text = pctl::to_string(*f);
    auto [it, inserted] = formula_texts_.emplace(text, static_cast<std::uint32_t>(formula_texts_.size()));
    formula_ids_.emplace(f.get(), it->second);
    retained_.push_back(f);  // keeps the pointer key alive
    return it->second;
}

TransitionList Engine::successors(const StateValuation& s) {
    auto out = model_->next(s);
    auto key = canonical_key(s);
    if (out.deadlock) deadlocks_.insert(key);
    expanded_.insert(std::move(key));
    return out;
}

void Engine::check_cap(std::size_t records, const char* phase) const {
    if (records > options_.state_cap) {
        throw ResourceError("state cap of " + std::to_string(options_.state_cap) + " records exceeded during " + phase);
    }
}

// ---------------------------------------------------------------------------
// Check / CheckPath

bool Engine::check(const StateValuation& s, const pctl::StatePtr& f) {
    const bool memoizable = std::holds_alternative<pctl::Not>(f->node) || std::holds_alternative<pctl::Or>(f->node) ||
                            std::holds_alternative<pctl::And>(f->node) ||
                            std::holds_alternative<pctl::Implies>(f->node) ||
                            std::holds_alternative<pctl::Prob>(f->node);
    if (!memoizable) return check_node(s, f);
    MemoKey mk{formula_id(f), canonical_key(s)};
    if (auto it = memo_.find(mk); it != memo_.end()) return it->second;
    const bool value = check_node(s, f);
    memo_.emplace(std::move(mk), value);
    return value;
}

bool Engine::check_node(const StateValuation& s, const pctl::StatePtr& f) {
    return std::visit(
        [&](const auto& n) -> bool {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, pctl::True>) {
                return true;
            } else if constexpr (std::is_same_v<T, pctl::False>) {
                return false;
            } else if constexpr (std::is_same_v<T, pctl::Atom>) {
                return model_->lab_eval(s, n.id);
            } else if constexpr (std::is_same_v<T, pctl::Not>) {
                return !check(s, n.arg);
            } else if constexpr (std::is_same_v<T, pctl::Or>) {
                return check(s, n.lhs) || check(s, n.rhs);
            } else if constexpr (std::is_same_v<T, pctl::And>) {
                return check(s, n.lhs) && check(s, n.rhs);
            } else if constexpr (std::is_same_v<T, pctl::Implies>) {
                return !check(s, n.lhs) || check(s, n.rhs);
            } else {
                if (n.bound.kind == pctl::BoundKind::query) throw Error("P=? may only appear at the top level");
                return pctl::satisfies(check_path(s, *n.path), n.bound, options_.bound_tolerance);
            }
        },
        f->node);
}

double Engine::check_path(const StateValuation& s, const pctl::PathFormula& phi) {
    return std::visit(
        [&](const auto& n) -> double {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, pctl::Next>) {
                double sum = 0.0;
                for (const auto& t : successors(s).items) {
                    if (check(t.target, n.arg)) sum += t.prob;
                }
                return sum;
            } else if constexpr (std::is_same_v<T, pctl::BoundedUntil>) {
                return check_bounded_until(s, n.lhs, n.k, n.rhs);
            } else if constexpr (std::is_same_v<T, pctl::Until>) {
                return check_unbounded_until(s, n.lhs, n.rhs);
            } else {
                throw std::invalid_argument("path formula must be desugared before checking: " + pctl::to_string(phi));
            }
        },
        phi.node);
}

pctl::Evaluation Engine::evaluate(const StateValuation& s, const pctl::StatePtr& f) {
    pctl::Evaluation out;
    if (const auto* p = std::get_if<pctl::Prob>(&f->node)) {
        double prob = check_path(s, *p->path);
        if (p->bound.complement) prob = 1.0 - prob;
        out.probability = prob;
        if (p->bound.kind != pctl::BoundKind::query) out.verdict = pctl::satisfies(prob, p->bound, options_.bound_tolerance);
        return out;
    }
    out.verdict = check(s, f);
    return out;
}

// ---------------------------------------------------------------------------
// Records

RecordLabel Engine::classify(const StateValuation& s, const pctl::StatePtr& lhs, const pctl::StatePtr& rhs) {
    if (check(s, rhs)) return RecordLabel::yes;
    if (!check(s, lhs)) return RecordLabel::no;
    return RecordLabel::unknown;
}

BURecord Engine::create_bu_record(const StateValuation& s, const pctl::StatePtr& lhs, const pctl::StatePtr& rhs) {
    BURecord r{s, {}, {0.0, 0.0}, classify(s, lhs, rhs)};
    if (r.label == RecordLabel::yes) r.p = {1.0, 1.0};
    ++stats_.records_created;
    return r;
}

UURecord Engine::create_uu_record(const StateValuation& s, const pctl::StatePtr& lhs, const pctl::StatePtr& rhs) {
    UURecord r{s, {}, {0.0, 0.0}, {0.0, 0.0}, classify(s, lhs, rhs)};
    if (r.label == RecordLabel::yes) r.p_yes = {1.0, 1.0};
    if (r.label == RecordLabel::no) r.p_no = {1.0, 1.0};
    ++stats_.records_created;
    return r;
}

// ---------------------------------------------------------------------------
// Bounded until

double Engine::check_bounded_until(const StateValuation& s, const pctl::StatePtr& lhs, std::uint32_t k,
                                   const pctl::StatePtr& rhs) {
    ++stats_.until_evaluations;
    last_iterations_ = 0;

    std::vector<BURecord> records;
    std::unordered_map<StateKey, std::uint32_t> index;
    std::vector<std::uint32_t> yes;

    records.push_back(create_bu_record(s, lhs, rhs));
    index.emplace(canonical_key(s), 0);
    if (records[0].label == RecordLabel::yes) {
        last_outcome_ = UntilOutcome::initial_yes;
        return 1.0;
    }
    if (records[0].label == RecordLabel::no) {
        last_outcome_ = UntilOutcome::initial_no;
        return 0.0;
    }

    // Expansion: breadth-first, at most k levels, UNKNOWN records only.
    std::deque<std::pair<std::uint32_t, std::uint32_t>> queue{{0, 0}};
    while (!queue.empty()) {
        const auto [r, depth] = queue.front();
        queue.pop_front();
        if (depth >= k) continue;
        const auto succ = successors(records[r].term);
        for (const auto& t : succ.items) {
            auto key = canonical_key(t.target);
            auto it = index.find(key);
            std::uint32_t target;
            if (it == index.end()) {
                target = static_cast<std::uint32_t>(records.size());
                check_cap(records.size() + 1, "bounded-until expansion");
                records.push_back(create_bu_record(t.target, lhs, rhs));
                index.emplace(std::move(key), target);
                if (records[target].label == RecordLabel::yes) yes.push_back(target);
                if (records[target].label == RecordLabel::unknown) queue.emplace_back(target, depth + 1);
            } else {
                target = it->second;
            }
            records[target].prec.push_back({r, t.prob});
        }
    }

    if (yes.empty()) {
        last_outcome_ = UntilOutcome::no_yes;
        return 0.0;
    }

    // Computation: propagate backwards from the YES records, one horizon per step.
    std::vector<bool> active(records.size(), false);
    std::vector<std::uint32_t> members;
    for (auto y : yes) {
        active[y] = true;
        members.push_back(y);
    }
    std::span<const BURecord> view(records);
    if (hooks_.bounded_iteration) hooks_.bounded_iteration(view, 0, 0);

    for (std::uint32_t i = 1; i <= k; ++i) {
        const std::size_t cur = i % 2, prev = 1 - cur;
        const std::size_t old_size = members.size();
        for (std::size_t m = 0; m < old_size; ++m) {
            for (const auto& e : records[members[m]].prec) {
                if (!active[e.record]) {
                    active[e.record] = true;
                    members.push_back(e.record);
                }
            }
        }
        for (auto m : members) {
            if (records[m].label == RecordLabel::unknown) records[m].p[cur] = 0.0;
        }
        for (std::size_t m = 0; m < old_size; ++m) {
            const auto& r = records[members[m]];
            const double v = r.p[prev];
            if (v == 0.0) continue;
            for (const auto& e : r.prec) {
                auto& pred = records[e.record];
                if (pred.label == RecordLabel::unknown) pred.p[cur] += e.prob * v;
            }
        }
        ++stats_.iterations;
        ++last_iterations_;
        if (hooks_.bounded_iteration) hooks_.bounded_iteration(view, cur, i);
    }

    last_outcome_ = UntilOutcome::computed;
    return records[0].p[k % 2];
}

// ---------------------------------------------------------------------------
// Unbounded until

bool Engine::converged(std::span<const UURecord> records, std::size_t slot) const {
    const double threshold = 1.0 - options_.epsilon;
    if (options_.converge_initial_only) return records[0].p_yes[slot] + records[0].p_no[slot] >= threshold;
    for (const auto& r : records) {
        if (r.p_yes[slot] + r.p_no[slot] < threshold) return false;
    }
    return true;
}

double Engine::check_unbounded_until(const StateValuation& s, const pctl::StatePtr& lhs, const pctl::StatePtr& rhs) {
    ++stats_.until_evaluations;
    last_iterations_ = 0;

    std::vector<UURecord> records;
    std::unordered_map<StateKey, std::uint32_t> index;
    std::vector<std::uint32_t> yes, no;

    records.push_back(create_uu_record(s, lhs, rhs));
    index.emplace(canonical_key(s), 0);
    if (records[0].label == RecordLabel::yes) {
        last_outcome_ = UntilOutcome::initial_yes;
        return 1.0;
    }
    if (records[0].label == RecordLabel::no) {
        last_outcome_ = UntilOutcome::initial_no;
        return 0.0;
    }

    // Expansion to fixpoint over UNKNOWN records.
    std::deque<std::uint32_t> queue{0};
    while (!queue.empty()) {
        const auto r = queue.front();
        queue.pop_front();
        const auto succ = successors(records[r].term);
        for (const auto& t : succ.items) {
            auto key = canonical_key(t.target);
            auto it = index.find(key);
            std::uint32_t target;
            if (it == index.end()) {
                target = static_cast<std::uint32_t>(records.size());
                check_cap(records.size() + 1, "unbounded-until expansion");
                records.push_back(create_uu_record(t.target, lhs, rhs));
                index.emplace(std::move(key), target);
                switch (records[target].label) {
                    case RecordLabel::yes: yes.push_back(target); break;
                    case RecordLabel::no: no.push_back(target); break;
                    case RecordLabel::unknown: queue.push_back(target); break;
                }
            } else {
                target = it->second;
            }
            records[target].prec.push_back({r, t.prob});
        }
    }

    if (yes.empty()) {
        last_outcome_ = UntilOutcome::no_yes;
        return 0.0;
    }

    // Records that cannot reach YES become NO.
    {
        std::vector<bool> reach(records.size(), false);
        for (auto r : backward_closure<UURecord>(records, yes)) reach[r] = true;
        for (std::uint32_t r = 0; r < records.size(); ++r) {
            if (!reach[r] && records[r].label == RecordLabel::unknown) {
                records[r].label = RecordLabel::no;
                records[r].p_yes = {0.0, 0.0};
                records[r].p_no = {1.0, 1.0};
                no.push_back(r);
            }
        }
    }
    if (no.empty()) {
        last_outcome_ = UntilOutcome::no_no;
        for (auto& r : records) {
            if (r.label == RecordLabel::unknown) {
                r.label = RecordLabel::yes;
                r.p_yes = {1.0, 1.0};
            }
        }
        if (hooks_.after_relabel) hooks_.after_relabel(records);
        return 1.0;
    }
    // Records that cannot reach NO reach YES almost surely.
    {
        std::vector<bool> reach(records.size(), false);
        for (auto r : backward_closure<UURecord>(records, no)) reach[r] = true;
        for (std::uint32_t r = 0; r < records.size(); ++r) {
            if (!reach[r] && records[r].label == RecordLabel::unknown) {
                records[r].label = RecordLabel::yes;
                records[r].p_yes = {1.0, 1.0};
                records[r].p_no = {0.0, 0.0};
                yes.push_back(r);
            }
        }
    }
    std::span<const UURecord> view(records);
    if (hooks_.after_relabel) hooks_.after_relabel(view);

    // Computation: two-slot iteration until every record (or the root) has converged.
    std::vector<bool> active(records.size(), false);
    std::vector<std::uint32_t> members;
    for (const auto* seeds : {&yes, &no}) {
        for (auto r : *seeds) {
            if (!active[r]) {
                active[r] = true;
                members.push_back(r);
            }
        }
    }
    if (hooks_.unbounded_iteration) hooks_.unbounded_iteration(view, 0, 0);

    std::size_t slot = 0;
    std::size_t i = 0;
    while (!converged(view, slot)) {
        if (i >= options_.max_iterations) {
            throw ResourceError("unbounded until did not converge within " + std::to_string(options_.max_iterations) +
                                " iterations");
        }
        ++i;
        const std::size_t cur = i % 2, prev = 1 - cur;
        const std::size_t old_size = members.size();
        for (std::size_t m = 0; m < old_size; ++m) {
            for (const auto& e : records[members[m]].prec) {
                if (!active[e.record]) {
                    active[e.record] = true;
                    members.push_back(e.record);
                }
            }
        }
        for (auto m : members) {
            if (records[m].label == RecordLabel::unknown) {
                records[m].p_yes[cur] = 0.0;
                records[m].p_no[cur] = 0.0;
            }
        }
        for (std::size_t m = 0; m < old_size; ++m) {
            const auto& r = records[members[m]];
            const double vy = r.p_yes[prev], vn = r.p_no[prev];
            if (vy == 0.0 && vn == 0.0) continue;
            for (const auto& e : r.prec) {
                auto& pred = records[e.record];
                if (pred.label != RecordLabel::unknown) continue;
                pred.p_yes[cur] += e.prob * vy;
                pred.p_no[cur] += e.prob * vn;
            }
        }
        slot = cur;
        ++stats_.iterations;
        ++last_iterations_;
        if (hooks_.unbounded_iteration) hooks_.unbounded_iteration(view, cur, i);
    }

    last_outcome_ = UntilOutcome::computed;
    return records[0].p_yes[slot];
}

}  // namespace flycheck
