#include <algorithm>
#include <numeric>
#include <random>
#include <stdexcept>

#include "flycheck/oracle.hpp"

namespace flycheck {

std::shared_ptr<const TableSemantics> random_dtmc(std::uint64_t seed, std::uint32_t n, std::uint32_t d,
                                                  std::uint32_t atoms) {
    if (n == 0 || d == 0) throw std::invalid_argument("random_dtmc needs n >= 1 and d >= 1");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> weight(0.05, 1.0);
    std::bernoulli_distribution coin(0.5);

    std::vector<std::uint32_t> all(n);
    std::iota(all.begin(), all.end(), 0u);

    std::vector<TableSemantics::Row> rows(n);
    for (std::uint32_t s = 0; s < n; ++s) {
        const std::uint32_t hi = std::min(d, n);
        const auto degree = std::uniform_int_distribution<std::uint32_t>(1, hi)(rng);
        // Partial Fisher-Yates draw of distinct targets.
        for (std::uint32_t i = 0; i < degree; ++i) {
            const auto j = std::uniform_int_distribution<std::uint32_t>(i, n - 1)(rng);
            std::swap(all[i], all[j]);
        }
        double total = 0.0;
        std::vector<double> w(degree);
        for (auto& x : w) total += (x = weight(rng));
        for (std::uint32_t i = 0; i < degree; ++i) rows[s].emplace_back(all[i], w[i] / total);
        std::sort(rows[s].begin(), rows[s].end());
    }

    std::map<std::string, std::vector<bool>> labels;
    for (std::uint32_t a = 0; a < atoms; ++a) {
        std::vector<bool> bits(n);
        for (std::uint32_t s = 0; s < n; ++s) bits[s] = coin(rng);
        labels.emplace("a" + std::to_string(a), std::move(bits));
    }
    return std::make_shared<const TableSemantics>(std::move(rows), std::move(labels));
}

}  // namespace flycheck
