#include "flycheck/oracle.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <cmath>
#include <deque>
#include <ostream>
#include <stdexcept>
#include <type_traits>

#include "flycheck/errors.hpp"

namespace flycheck {

namespace {

// Dense elimination is used up to this many unknowns, sparse LU beyond.
constexpr std::size_t kDenseLimit = 2000;

// Solves A x = b in place with partial pivoting; A is row-major n x n.
std::vector<double> gauss_solve(std::vector<double> a, std::vector<double> b, std::size_t n) {
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::abs(a[r * n + col]) > std::abs(a[pivot * n + col])) pivot = r;
        }
        if (std::abs(a[pivot * n + col]) < 1e-300) throw std::runtime_error("singular until system");
        if (pivot != col) {
            for (std::size_t c = 0; c < n; ++c) std::swap(a[col * n + c], a[pivot * n + c]);
            std::swap(b[col], b[pivot]);
        }
        const double diag = a[col * n + col];
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = a[r * n + col] / diag;
            if (f == 0.0) continue;
            for (std::size_t c = col; c < n; ++c) a[r * n + c] -= f * a[col * n + c];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t r = n; r-- > 0;) {
        double sum = b[r];
        for (std::size_t c = r + 1; c < n; ++c) sum -= a[r * n + c] * x[c];
        x[r] = sum / a[r * n + r];
    }
    return x;
}

std::vector<double> sparse_solve(const std::vector<Eigen::Triplet<double>>& entries, const std::vector<double>& b,
                                 std::size_t n) {
    Eigen::SparseMatrix<double> a(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    a.setFromTriplets(entries.begin(), entries.end());
    a.makeCompressed();
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(a);
    if (lu.info() != Eigen::Success) throw std::runtime_error("singular until system");
    Eigen::VectorXd rhs = Eigen::Map<const Eigen::VectorXd>(b.data(), static_cast<Eigen::Index>(n));
    Eigen::VectorXd x = lu.solve(rhs);
    return {x.data(), x.data() + x.size()};
}

// States that can reach `target` through states in `via`.
SatSet backward_reach(const ExplicitDtmc& d, const SatSet& target, const SatSet& via) {
    const std::size_t n = d.size();
    std::vector<std::vector<std::uint32_t>> pred(n);
    for (std::uint32_t s = 0; s < n; ++s) {
        for (const auto& [t, p] : d.rows[s]) pred[t].push_back(s);
    }
    SatSet out = target;
    std::deque<std::uint32_t> queue;
    for (std::uint32_t s = 0; s < n; ++s) {
        if (out[s]) queue.push_back(s);
    }
    while (!queue.empty()) {
        const auto t = queue.front();
        queue.pop_front();
        for (auto s : pred[t]) {
            if (!out[s] && via[s]) {
                out[s] = true;
                queue.push_back(s);
            }
        }
    }
    return out;
}

SatSet difference(const SatSet& a, const SatSet& b) {
    SatSet out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] && !b[i];
    return out;
}

}  // namespace

std::optional<std::uint32_t> ExplicitDtmc::index_of(const StateValuation& s) const {
    auto it = index.find(canonical_key(s));
    if (it == index.end()) return std::nullopt;
    return it->second;
}

ExplicitDtmc enumerate(std::shared_ptr<const ModelSemantics> model, std::size_t cap) {
    ExplicitDtmc d;
    d.model = model;
    auto add = [&](const StateValuation& s) {
        auto [it, inserted] = d.index.emplace(canonical_key(s), static_cast<std::uint32_t>(d.states.size()));
        if (inserted) {
            if (d.states.size() >= cap) {
                throw ResourceError("state cap of " + std::to_string(cap) + " exceeded during enumeration");
            }
            d.states.push_back(s);
        }
        return it->second;
    };
    add(model->initial_state());
    for (std::size_t i = 0; i < d.states.size(); ++i) {
        auto succ = model->next(d.states[i]);
        if (succ.deadlock) ++d.deadlocks;
        std::vector<std::pair<std::uint32_t, double>> row;
        row.reserve(succ.items.size());
        for (const auto& t : succ.items) row.emplace_back(add(t.target), t.prob);
        d.rows.push_back(std::move(row));
    }
    for (const auto& a : model->atoms()) {
        SatSet bits(d.size());
        for (std::size_t i = 0; i < d.size(); ++i) bits[i] = model->lab_eval(d.states[i], a);
        d.labels.emplace(a.name, std::move(bits));
    }
    return d;
}

// ---------------------------------------------------------------------------

std::vector<double> oracle_next(const ExplicitDtmc& d, const SatSet& sat) {
    std::vector<double> x(d.size(), 0.0);
    for (std::size_t s = 0; s < d.size(); ++s) {
        for (const auto& [t, p] : d.rows[s]) {
            if (sat[t]) x[s] += p;
        }
    }
    return x;
}

std::vector<double> oracle_bounded_until(const ExplicitDtmc& d, const SatSet& sat1, const SatSet& sat2,
                                         std::uint32_t k) {
    const std::size_t n = d.size();
    std::vector<double> x(n);
    for (std::size_t s = 0; s < n; ++s) x[s] = sat2[s] ? 1.0 : 0.0;
    std::vector<double> y(n);
    for (std::uint32_t i = 0; i < k; ++i) {
        for (std::size_t s = 0; s < n; ++s) {
            if (sat2[s]) {
                y[s] = 1.0;
            } else if (sat1[s]) {
                double sum = 0.0;
                for (const auto& [t, p] : d.rows[s]) sum += p * x[t];
                y[s] = sum;
            } else {
                y[s] = 0.0;
            }
        }
        std::swap(x, y);
    }
    return x;
}

SatSet prob0(const ExplicitDtmc& d, const SatSet& sat1, const SatSet& sat2) {
    const SatSet positive = backward_reach(d, sat2, difference(sat1, sat2));
    SatSet out(d.size());
    for (std::size_t s = 0; s < d.size(); ++s) out[s] = !positive[s];
    return out;
}

SatSet prob1(const ExplicitDtmc& d, const SatSet& sat1, const SatSet& sat2) {
    const SatSet zero = prob0(d, sat1, sat2);
    const SatSet below_one = backward_reach(d, zero, difference(sat1, sat2));
    SatSet out(d.size());
    for (std::size_t s = 0; s < d.size(); ++s) out[s] = !below_one[s];
    return out;
}

std::vector<double> oracle_unbounded_until(const ExplicitDtmc& d, const SatSet& sat1, const SatSet& sat2) {
    const std::size_t n = d.size();
    const SatSet zero = prob0(d, sat1, sat2);
    const SatSet one = prob1(d, sat1, sat2);

    std::vector<double> x(n, 0.0);
    std::vector<std::int64_t> var(n, -1);
    std::vector<std::uint32_t> unknown;
    for (std::uint32_t s = 0; s < n; ++s) {
        if (one[s]) {
            x[s] = 1.0;
        } else if (!zero[s]) {
            var[s] = static_cast<std::int64_t>(unknown.size());
            unknown.push_back(s);
        }
    }
    const std::size_t m = unknown.size();
    if (m == 0) return x;

    // (I - P_uu) x_u = P_u,one * 1
    std::vector<double> b(m, 0.0);
    if (m <= kDenseLimit) {
        std::vector<double> a(m * m, 0.0);
        for (std::size_t i = 0; i < m; ++i) {
            a[i * m + i] = 1.0;
            for (const auto& [t, p] : d.rows[unknown[i]]) {
                if (var[t] >= 0) {
                    a[i * m + static_cast<std::size_t>(var[t])] -= p;
                } else if (one[t]) {
                    b[i] += p;
                }
            }
        }
        auto sol = gauss_solve(std::move(a), std::move(b), m);
        for (std::size_t i = 0; i < m; ++i) x[unknown[i]] = sol[i];
    } else {
        std::vector<Eigen::Triplet<double>> entries;
        for (std::size_t i = 0; i < m; ++i) {
            const auto row = static_cast<Eigen::Index>(i);
            entries.emplace_back(row, row, 1.0);
            for (const auto& [t, p] : d.rows[unknown[i]]) {
                if (var[t] >= 0) {
                    entries.emplace_back(row, static_cast<Eigen::Index>(var[t]), -p);
                } else if (one[t]) {
                    b[i] += p;
                }
            }
        }
        auto sol = sparse_solve(entries, b, m);
        for (std::size_t i = 0; i < m; ++i) x[unknown[i]] = sol[i];
    }
    return x;
}

// ---------------------------------------------------------------------------

std::vector<double> oracle_path(const ExplicitDtmc& d, const pctl::PathFormula& phi) {
    return std::visit(
        [&](const auto& n) -> std::vector<double> {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, pctl::Next>) {
                return oracle_next(d, oracle_check(d, *n.arg));
            } else if constexpr (std::is_same_v<T, pctl::BoundedUntil>) {
                return oracle_bounded_until(d, oracle_check(d, *n.lhs), oracle_check(d, *n.rhs), n.k);
            } else if constexpr (std::is_same_v<T, pctl::Until>) {
                return oracle_unbounded_until(d, oracle_check(d, *n.lhs), oracle_check(d, *n.rhs));
            } else {
                throw std::invalid_argument("path formula must be desugared: " + pctl::to_string(phi));
            }
        },
        phi.node);
}

SatSet oracle_check(const ExplicitDtmc& d, const pctl::StateFormula& f) {
    const std::size_t n = d.size();
    return std::visit(
        [&](const auto& node) -> SatSet {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, pctl::True>) {
                return SatSet(n, true);
            } else if constexpr (std::is_same_v<T, pctl::False>) {
                return SatSet(n, false);
            } else if constexpr (std::is_same_v<T, pctl::Atom>) {
                if (!node.id.is_inline()) {
                    auto it = d.labels.find(node.id.name);
                    if (it == d.labels.end()) throw UnknownLabelError(node.id.name);
                    return it->second;
                }
                SatSet out(n);
                for (std::size_t s = 0; s < n; ++s) out[s] = d.model->lab_eval(d.states[s], node.id);
                return out;
            } else if constexpr (std::is_same_v<T, pctl::Not>) {
                auto out = oracle_check(d, *node.arg);
                out.flip();
                return out;
            } else if constexpr (std::is_same_v<T, pctl::Or> || std::is_same_v<T, pctl::And> ||
                                 std::is_same_v<T, pctl::Implies>) {
                auto a = oracle_check(d, *node.lhs);
                auto b = oracle_check(d, *node.rhs);
                for (std::size_t s = 0; s < n; ++s) {
                    if constexpr (std::is_same_v<T, pctl::Or>) a[s] = a[s] || b[s];
                    if constexpr (std::is_same_v<T, pctl::And>) a[s] = a[s] && b[s];
                    if constexpr (std::is_same_v<T, pctl::Implies>) a[s] = !a[s] || b[s];
                }
                return a;
            } else {
                if (node.bound.kind == pctl::BoundKind::query) throw Error("P=? may only appear at the top level");
                const auto x = oracle_path(d, *node.path);
                SatSet out(n);
                for (std::size_t s = 0; s < n; ++s) out[s] = pctl::satisfies(x[s], node.bound);
                return out;
            }
        },
        f.node);
}

pctl::Evaluation oracle_evaluate(const ExplicitDtmc& d, std::uint32_t state, const pctl::StatePtr& f,
                                 double bound_tolerance) {
    pctl::Evaluation out;
    if (const auto* p = std::get_if<pctl::Prob>(&f->node)) {
        double prob = oracle_path(d, *p->path)[state];
        if (p->bound.complement) prob = 1.0 - prob;
        out.probability = prob;
        if (p->bound.kind != pctl::BoundKind::query) out.verdict = pctl::satisfies(prob, p->bound, bound_tolerance);
        return out;
    }
    out.verdict = oracle_check(d, *f)[state];
    return out;
}

void export_transitions(const ExplicitDtmc& d, std::ostream& os) {
    auto precision = os.precision(17);
    for (std::size_t s = 0; s < d.size(); ++s) {
        for (const auto& [t, p] : d.rows[s]) os << s << ' ' << t << ' ' << p << '\n';
    }
    os.precision(precision);
}

void export_labels(const ExplicitDtmc& d, std::ostream& os) {
    for (std::size_t s = 0; s < d.size(); ++s) {
        for (const auto& [name, bits] : d.labels) {
            if (bits[s]) os << s << ' ' << name << '\n';
        }
    }
}

}  // namespace flycheck
