#pragma once

#include "crnsign/model.hpp"

#include <algorithm>
#include <random>
#include <string>
#include <vector>

namespace crnsign::testing {

struct RandomNetworkShape {
    std::size_t max_species = 8;
    std::size_t max_reactions = 10;
    long max_coeff = 3;
    double side_probability = 0.3; // chance a species joins each side
};

/// Seeded network in reaction form: every reaction has disjoint sides and
/// at least one nonempty side. Unused species are dropped, so the result
/// has 2..max_species species and 2..max_reactions reactions.
inline Network random_network(std::mt19937_64 &rng, const RandomNetworkShape &shape = {}) {
    std::uniform_int_distribution<std::size_t> nd(2, shape.max_species);
    std::uniform_int_distribution<std::size_t> nr(2, shape.max_reactions);
    std::uniform_int_distribution<long> coeff(1, shape.max_coeff);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (;;) {
        const std::size_t d = nd(rng), r = nr(rng);
        std::vector<std::pair<Complex::Terms, Complex::Terms>> sides;
        while (sides.size() < r) {
            Complex::Terms lhs, rhs;
            for (std::size_t i = 0; i < d; ++i) {
                double t = u(rng);
                if (t < shape.side_probability)
                    lhs[i] = coeff(rng);
                else if (t < 2 * shape.side_probability)
                    rhs[i] = coeff(rng);
            }
            if (!lhs.empty() || !rhs.empty())
                sides.emplace_back(std::move(lhs), std::move(rhs));
        }
        std::vector<std::size_t> index(d, d);
        std::size_t used = 0;
        for (const auto &[lhs, rhs] : sides)
            for (const auto *t : {&lhs, &rhs})
                for (const auto &term : *t)
                    if (index[term.first] == d)
                        index[term.first] = 0, ++used;
        if (used < 2)
            continue;
        std::vector<std::string> names;
        for (std::size_t i = 0, next = 0; i < d; ++i)
            if (index[i] != d) {
                index[i] = next++;
                names.push_back("X" + std::to_string(next));
            }
        auto remap = [&](const Complex::Terms &t) {
            Complex::Terms out;
            for (const auto &[i, c] : t)
                out[index[i]] = c;
            return Complex(out);
        };
        std::vector<Reaction> reactions;
        for (const auto &[lhs, rhs] : sides)
            reactions.push_back({remap(lhs), remap(rhs), std::nullopt, std::nullopt});
        return Network(std::move(names), std::move(reactions));
    }
}

/// Random permutation of 0..n-1.
inline std::vector<std::size_t> random_order(std::mt19937_64 &rng, std::size_t n) {
    std::vector<std::size_t> p(n);
    for (std::size_t i = 0; i < n; ++i)
        p[i] = i;
    std::shuffle(p.begin(), p.end(), rng);
    return p;
}

} // namespace crnsign::testing
