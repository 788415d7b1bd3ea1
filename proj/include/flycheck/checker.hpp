#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <functional>
#include <limits>
#include <memory>
#include <span>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "flycheck/pctl.hpp"
#include "flycheck/state.hpp"

namespace flycheck {

enum class RecordLabel { yes, no, unknown };

const char* to_string(RecordLabel l);

/// Backward edge to a predecessor record, with the one-step probability.
struct PrecEdge {
    std::uint32_t record;
    double prob;
};

/// Bounded-until record. `p` holds the two rolling slots of the per-horizon
/// probability array.
struct BURecord {
    StateValuation term;
    std::vector<PrecEdge> prec;
    std::array<double, 2> p{0.0, 0.0};
    RecordLabel label = RecordLabel::unknown;
};

/// Unbounded-until record with lower bounds on reaching a YES (`p_yes`) or
/// a NO (`p_no`) record.
struct UURecord {
    StateValuation term;
    std::vector<PrecEdge> prec;
    std::array<double, 2> p_yes{0.0, 0.0};
    std::array<double, 2> p_no{0.0, 0.0};
    RecordLabel label = RecordLabel::unknown;
};

/// Records reaching some seed along prec edges, seeds included, in BFS order.
template <class Record>
std::vector<std::uint32_t> backward_closure(std::span<const Record> records, std::span<const std::uint32_t> seeds) {
    std::vector<bool> seen(records.size(), false);
    std::vector<std::uint32_t> out;
    for (auto s : seeds) {
        if (!seen[s]) {
            seen[s] = true;
            out.push_back(s);
        }
    }
    for (std::size_t head = 0; head < out.size(); ++head) {
        for (const auto& e : records[out[head]].prec) {
            if (!seen[e.record]) {
                seen[e.record] = true;
                out.push_back(e.record);
            }
        }
    }
    return out;
}

struct EngineOptions {
    double epsilon = 1e-6;
    std::size_t state_cap = 10'000'000;
    /// Stop iterating once the initial record has converged instead of all records.
    bool converge_initial_only = false;
    /// Widens P-bound comparisons; 0 compares exactly.
    double bound_tolerance = 0.0;
    /// Safety net for the unbounded computation phase.
    std::size_t max_iterations = 100'000'000;
};

struct CheckStats {
    std::size_t states_expanded = 0;    // distinct states whose successors were computed
    std::size_t records_created = 0;    // summed over until evaluations
    std::size_t iterations = 0;         // computation-phase steps, summed
    std::size_t deadlocks_patched = 0;  // distinct states whose successor list was a patched self-loop
    std::size_t until_evaluations = 0;
};

/// How the last until evaluation produced its value.
enum class UntilOutcome {
    initial_yes,   // s satisfies the right operand
    initial_no,    // s satisfies neither operand
    no_yes,        // no YES record was found
    no_no,         // no NO record remained after relabelling (unbounded only)
    computed,      // computation phase ran
};

const char* to_string(UntilOutcome o);

/// Instrumentation points, all optional. `slot` is the slot written by
/// `iteration`; iteration 0 reports the initial values.
struct EngineHooks {
    std::function<void(std::span<const BURecord>, std::size_t slot, std::size_t iteration)> bounded_iteration;
    std::function<void(std::span<const UURecord>, std::size_t slot, std::size_t iteration)> unbounded_iteration;
    std::function<void(std::span<const UURecord>)> after_relabel;
};

/// On-the-fly PCTL checker over an abstract model semantics.
///
/// Not thread-safe; use one engine per thread. The model may be shared.
class Engine {
public:
    explicit Engine(std::shared_ptr<const ModelSemantics> model, EngineOptions options = {});

    const ModelSemantics& model() const { return *model_; }
    const EngineOptions& options() const { return options_; }
    EngineHooks& hooks() { return hooks_; }

    bool check(const StateValuation& s, const pctl::StatePtr& f);
    double check_path(const StateValuation& s, const pctl::PathFormula& phi);

    BURecord create_bu_record(const StateValuation& s, const pctl::StatePtr& lhs, const pctl::StatePtr& rhs);
    UURecord create_uu_record(const StateValuation& s, const pctl::StatePtr& lhs, const pctl::StatePtr& rhs);

    double check_bounded_until(const StateValuation& s, const pctl::StatePtr& lhs, std::uint32_t k,
                               const pctl::StatePtr& rhs);
    double check_unbounded_until(const StateValuation& s, const pctl::StatePtr& lhs, const pctl::StatePtr& rhs);

    /// Truth value, plus the probability when the root is a P operator
    /// (complemented for rewritten `P=? [G f]`).
    pctl::Evaluation evaluate(const StateValuation& s, const pctl::StatePtr& f);

    void reset_stats();
    CheckStats read_stats() const;

    void clear_memo();
    std::size_t memo_size() const { return memo_.size(); }

    UntilOutcome last_until_outcome() const { return last_outcome_; }
    std::size_t last_until_iterations() const { return last_iterations_; }

private:
    struct MemoKey {
        std::uint32_t formula;
        StateKey state;
        bool operator==(const MemoKey&) const = default;
    };
    struct MemoHash {
        std::size_t operator()(const MemoKey& k) const noexcept {
            return std::hash<StateKey>{}(k.state) * 31u + k.formula;
        }
    };

    std::uint32_t formula_id(const pctl::StatePtr& f);
    TransitionList successors(const StateValuation& s);
    bool check_node(const StateValuation& s, const pctl::StatePtr& f);
    RecordLabel classify(const StateValuation& s, const pctl::StatePtr& lhs, const pctl::StatePtr& rhs);
    void check_cap(std::size_t records, const char* phase) const;
    bool converged(std::span<const UURecord> records, std::size_t slot) const;

    std::shared_ptr<const ModelSemantics> model_;
    EngineOptions options_;
    EngineHooks hooks_;

    std::unordered_map<const pctl::StateFormula*, std::uint32_t> formula_ids_;
    std::unordered_map<std::string, std::uint32_t> formula_texts_;
    std::vector<pctl::StatePtr> retained_;
    std::unordered_map<MemoKey, bool, MemoHash> memo_;

    std::unordered_set<StateKey> expanded_;
    std::unordered_set<StateKey> deadlocks_;
    CheckStats stats_;
    UntilOutcome last_outcome_ = UntilOutcome::computed;
    std::size_t last_iterations_ = 0;
};

}  // namespace flycheck
