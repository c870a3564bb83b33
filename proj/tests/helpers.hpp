#pragma once

// Shared deterministic generators for the unit and acceptance suites.

#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include "lcf/lcf.hpp"

namespace testgen {

using Rng = std::mt19937_64;

inline std::int64_t pick(Rng& rng, std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

inline lcf::Rational random_rational(Rng& rng, std::int64_t max_num = 9,
                                     std::int64_t max_den = 4) {
    return lcf::Rational(pick(rng, -max_num, max_num), pick(rng, 1, max_den));
}

/// Strictly increasing exponents with bounded denominators. The numerator
/// range keeps exponent spreads small enough for the 64-bit digit window of
/// the mixed-characteristic carry arithmetic.
inline std::vector<lcf::Rational> random_exponents(Rng& rng, std::size_t count,
                                                   std::int64_t max_den = 4,
                                                   std::int64_t max_num = 6) {
    std::set<lcf::Rational> s;
    while (s.size() < count) s.insert(random_rational(rng, max_num, max_den));
    return {s.begin(), s.end()};
}

inline lcf::Coefficient random_nonzero_coefficient(Rng& rng, const lcf::CharMode& mode) {
    const std::uint32_t p = mode.residue_char();
    if (p == 0) {
        lcf::Rational r;
        while (r.is_zero()) r = random_rational(rng, 7, 5);
        return lcf::Coefficient::rational(r);
    }
    return lcf::Coefficient::prime_field(p, static_cast<std::uint64_t>(pick(rng, 1, p - 1)));
}

/// Random nonzero element with finite support; `trunc_slack` digits of
/// knowledge beyond the last term when finite_trunc is set.
inline lcf::Series random_series(Rng& rng, const lcf::CharMode& mode, std::size_t max_terms = 5,
                                 bool finite_trunc = false, std::int64_t trunc_slack = 4) {
    const std::size_t count = static_cast<std::size_t>(pick(rng, 1, static_cast<std::int64_t>(max_terms)));
    const auto exps = random_exponents(rng, count);
    std::vector<lcf::Term> terms;
    for (const auto& g : exps) terms.push_back({g, random_nonzero_coefficient(rng, mode)});
    lcf::Exponent trunc = lcf::Exponent::infinity();
    if (finite_trunc) trunc = lcf::Exponent(exps.back() + lcf::Rational(trunc_slack));
    return lcf::Series(mode, std::move(terms), trunc);
}

/// Corpus space for the acceptance criteria: n <= size_cap points, distance
/// exponents rational with denominator <= 8, deterministic per seed.
inline lcf::UltraSpace corpus_space(std::uint64_t seed, std::size_t size_cap = 32) {
    Rng rng(seed * 0x9e3779b97f4a7c15ULL + 1);
    const std::size_t n = static_cast<std::size_t>(pick(rng, 1, static_cast<std::int64_t>(size_cap)));
    const std::size_t depth = static_cast<std::size_t>(pick(rng, 1, 6));
    lcf::UltraSpace space = lcf::random_ultrametric(n, depth, seed);

    std::set<lcf::Rational> levels;
    while (levels.size() < depth + 1)
        levels.insert(lcf::Rational(pick(rng, -16, 16), pick(rng, 1, 8)));
    return lcf::remap_exponents(space, {levels.begin(), levels.end()});
}

/// H_p-valued corpus space: integer exponents as produced by the tree.
inline lcf::UltraSpace corpus_space_integral(std::uint64_t seed, std::size_t n,
                                             std::size_t depth = 4) {
    return lcf::random_ultrametric(n, depth, seed);
}

inline std::vector<lcf::CharMode> all_modes() {
    return {lcf::CharMode::equal(2), lcf::CharMode::equal(3), lcf::CharMode::equal(0),
            lcf::CharMode::mixed(2), lcf::CharMode::mixed(3), lcf::CharMode::mixed(5)};
}

} // namespace testgen
