// Shared fixtures for the unit tests and the acceptance binary.
#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "flycheck/checker.hpp"
#include "flycheck/oracle.hpp"
#include "flycheck/pctl.hpp"
#include "flycheck/table_semantics.hpp"

namespace flycheck::testing {

inline std::string corpus_path(const std::string& rel) { return std::string(FLYCHECK_CORPUS_DIR) + "/" + rel; }

inline std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline const std::vector<std::string>& corpus_models() {
    static const std::vector<std::string> names{"herman3", "herman5", "herman7", "herman9", "phil3", "phil4", "phil5"};
    return names;
}

/// s0 -0.5-> g, s0 -0.3-> s0, s0 -0.2-> d; g and d absorbing.
/// Labels: "phi1" on s0, "phi2" on g.
inline std::shared_ptr<const TableSemantics> gambler() {
    return std::make_shared<const TableSemantics>(
        std::vector<TableSemantics::Row>{{{1, 0.5}, {0, 0.3}, {2, 0.2}}, {{1, 1.0}}, {{2, 1.0}}},
        std::map<std::string, std::vector<bool>>{{"phi1", {true, false, false}}, {"phi2", {false, true, false}}});
}

/// s0 -0.5-> g, s0 -0.5-> d; g and d absorbing; same labels as gambler().
inline std::shared_ptr<const TableSemantics> split() {
    return std::make_shared<const TableSemantics>(
        std::vector<TableSemantics::Row>{{{1, 0.5}, {2, 0.5}}, {{1, 1.0}}, {{2, 1.0}}},
        std::map<std::string, std::vector<bool>>{{"phi1", {true, false, false}}, {"phi2", {false, true, false}}});
}

inline pctl::StatePtr atom(const char* name) { return pctl::make_atom(std::string(name)); }

/// Random formulas over atoms a0..a2 whose probability bounds keep a margin
/// from every state's exact value, so that both engines must agree.
class FormulaGenerator {
public:
    FormulaGenerator(std::uint64_t seed, const ExplicitDtmc& d, double epsilon)
        : rng_(seed), d_(d), epsilon_(epsilon) {}

    pctl::StatePtr state_formula(int depth) {
        const int pick = depth <= 0 ? uniform(0, 2) : uniform(0, 7);
        switch (pick) {
            case 0:
            case 1: return pctl::make_atom("a" + std::to_string(uniform(0, 2)));
            case 2: return uniform(0, 1) ? pctl::make_true() : pctl::make_false();
            case 3: return pctl::make_not(state_formula(depth - 1));
            case 4: return pctl::make_and(state_formula(depth - 1), state_formula(depth - 1));
            case 5: return pctl::make_or(state_formula(depth - 1), state_formula(depth - 1));
            default: return prob(depth);
        }
    }

    /// Root-level formula: mostly P operators, sometimes a boolean combination.
    pctl::StatePtr root(int depth = 3) { return uniform(0, 9) < 7 ? prob(depth) : state_formula(depth); }

    pctl::StatePtr prob(int depth) {
        pctl::PathPtr path;
        bool unbounded = false;
        switch (uniform(0, 2)) {
            case 0: path = pctl::make_next(state_formula(depth - 1)); break;
            case 1:
                path = pctl::make_bounded_until(state_formula(depth - 1), static_cast<std::uint32_t>(uniform(0, 25)),
                                                state_formula(depth - 1));
                break;
            default:
                path = pctl::make_until(state_formula(depth - 1), state_formula(depth - 1));
                unbounded = true;
                break;
        }
        const auto values = oracle_path(d_, *path);
        // The on-the-fly unbounded value may lie up to epsilon below the exact one.
        const double below = (unbounded ? epsilon_ : 0.0) + 1e-6;
        const double above = 1e-6;
        std::uniform_real_distribution<double> draw(0.0, 1.0);
        for (int attempt = 0; attempt < 200; ++attempt) {
            const double p = draw(rng_);
            const bool clear = std::all_of(values.begin(), values.end(),
                                           [&](double x) { return p < x - below || p > x + above; });
            if (clear) {
                static constexpr pctl::BoundKind kinds[] = {pctl::BoundKind::le, pctl::BoundKind::lt,
                                                            pctl::BoundKind::gt, pctl::BoundKind::ge};
                return pctl::make_prob({kinds[uniform(0, 3)], p, false}, path);
            }
        }
        return pctl::make_prob({pctl::BoundKind::ge, 0.0, false}, path);
    }

    int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    std::mt19937_64& rng() { return rng_; }

private:
    std::mt19937_64 rng_;
    const ExplicitDtmc& d_;
    double epsilon_;
};

/// Largest row mass of `P` kept inside `unknown`.
inline double q_max(const ExplicitDtmc& d, const SatSet& unknown) {
    double best = 0.0;
    for (std::size_t s = 0; s < d.size(); ++s) {
        if (!unknown[s]) continue;
        double stay = 0.0;
        for (const auto& [t, p] : d.rows[s]) {
            if (unknown[t]) stay += p;
        }
        best = std::max(best, stay);
    }
    return best;
}

/// Smallest i with max_s (Q^i 1)(s) <= eps over `unknown`, capped at `cap`.
inline std::size_t transient_horizon(const ExplicitDtmc& d, const SatSet& unknown, double eps, std::size_t cap) {
    std::vector<double> x(d.size(), 0.0), y(d.size(), 0.0);
    for (std::size_t s = 0; s < d.size(); ++s) x[s] = unknown[s] ? 1.0 : 0.0;
    for (std::size_t i = 0; i < cap; ++i) {
        double worst = 0.0;
        for (std::size_t s = 0; s < d.size(); ++s) worst = std::max(worst, x[s]);
        if (worst <= eps) return i;
        for (std::size_t s = 0; s < d.size(); ++s) {
            double sum = 0.0;
            if (unknown[s]) {
                for (const auto& [t, p] : d.rows[s]) sum += p * x[t];
            }
            y[s] = sum;
        }
        std::swap(x, y);
    }
    return cap;
}

/// States reachable from `from` in the explicit chain.
inline SatSet reachable_from(const ExplicitDtmc& d, std::uint32_t from) {
    SatSet seen(d.size(), false);
    std::vector<std::uint32_t> stack{from};
    seen[from] = true;
    while (!stack.empty()) {
        auto s = stack.back();
        stack.pop_back();
        for (const auto& [t, p] : d.rows[s]) {
            if (!seen[t]) {
                seen[t] = true;
                stack.push_back(t);
            }
        }
    }
    return seen;
}

}  // namespace flycheck::testing
