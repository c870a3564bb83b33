#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "errors.hpp"
#include "exponent.hpp"

namespace lcf {

/// Finite labeled ultrametric space with exponent-valued distances: the
/// matrix entry g stands for the distance eta^{-g}, the diagonal carries INF
/// (distance zero). Distinct points must be at positive distance, so
/// off-diagonal entries are finite; pseudo-ultrametrics are rejected.
class UltraSpace {
public:
    UltraSpace(std::vector<std::string> labels, std::vector<std::vector<Exponent>> dist)
        : labels_(std::move(labels)), dist_(std::move(dist)) {
        const std::size_t n = labels_.size();
        if (dist_.size() != n) throw MalformedMatrix("matrix size does not match label count");
        std::set<std::string> seen;
        for (const auto& l : labels_)
            if (!seen.insert(l).second) throw MalformedMatrix("duplicate label: " + l);
        for (std::size_t i = 0; i < n; ++i) {
            if (dist_[i].size() != n) throw MalformedMatrix("matrix row " + std::to_string(i) + " has wrong length");
            if (!dist_[i][i].is_inf())
                throw MalformedMatrix("diagonal entry (" + std::to_string(i) + ") must be inf");
            for (std::size_t j = 0; j < n; ++j) {
                if (i != j && dist_[i][j].is_inf())
                    throw MalformedMatrix("distinct points " + labels_[i] + ", " + labels_[j] +
                                          " at distance zero (pseudo-ultrametric rejected)");
                if (!(dist_[i][j] == dist_[j][i]))
                    throw MalformedMatrix("asymmetric entries at (" + labels_[i] + ", " +
                                          labels_[j] + ")");
            }
        }
    }

    std::size_t size() const { return labels_.size(); }
    const std::vector<std::string>& labels() const { return labels_; }
    const Exponent& g(std::size_t i, std::size_t j) const { return dist_[i][j]; }
    const std::vector<std::vector<Exponent>>& matrix() const { return dist_; }

    std::size_t index_of(const std::string& label) const {
        const auto it = std::find(labels_.begin(), labels_.end(), label);
        if (it == labels_.end()) throw DomainError("unknown label: " + label);
        return static_cast<std::size_t>(it - labels_.begin());
    }

    /// Smallest off-diagonal exponent, i.e. the largest distance; nullopt for
    /// a one-point space.
    std::optional<Rational> min_offdiag_exponent() const {
        std::optional<Rational> m;
        for (std::size_t i = 0; i < size(); ++i)
            for (std::size_t j = i + 1; j < size(); ++j) {
                const Rational& v = dist_[i][j].finite();
                if (!m || v < *m) m = v;
            }
        return m;
    }

private:
    std::vector<std::string> labels_;
    std::vector<std::vector<Exponent>> dist_;
};

struct UltrametricCheck {
    bool ok = true;
    // first violating triple, by index, with g(x,y) < min(g(x,z), g(z,y))
    std::size_t x = 0, y = 0, z = 0;
};

/// Strong triangle inequality in exponent form: for every triple,
/// g(x,y) >= min(g(x,z), g(z,y)). Returns the first violating triple on
/// failure. Matrix shape problems (asymmetry, finite diagonal) surface as
/// MalformedMatrix from the UltraSpace constructor.
inline UltrametricCheck verify_ultrametric(const UltraSpace& s) {
    const std::size_t n = s.size();
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y)
            for (std::size_t z = 0; z < n; ++z) {
                if (x == y || y == z || x == z) continue;
                if (s.g(x, y) < exp_min(s.g(x, z), s.g(z, y)))
                    return UltrametricCheck{false, x, y, z};
            }
    return UltrametricCheck{};
}

/// One-point extension by a sentinel point at exponent
/// g(x, sentinel) = min(g(x, x0), g0), the exponent form of
/// h(x, w) = d(x, x0) v r0. The original submatrix is preserved and the new
/// exponents stay inside the input range extended by g0.
inline UltraSpace sentinel_extend(const UltraSpace& s, const std::string& x0, const Rational& g0,
                                  const std::string& sentinel_label = "@sentinel") {
    const std::size_t i0 = s.index_of(x0);
    std::string name = sentinel_label;
    while (std::find(s.labels().begin(), s.labels().end(), name) != s.labels().end())
        name += "'";
    const std::size_t n = s.size();
    std::vector<std::string> labels = s.labels();
    labels.push_back(name);
    std::vector<std::vector<Exponent>> m(n + 1, std::vector<Exponent>(n + 1, Exponent::infinity()));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m[i][j] = s.g(i, j);
    for (std::size_t i = 0; i < n; ++i) {
        const Exponent e = exp_min(s.g(i, i0), Exponent(g0));
        m[i][n] = e;
        m[n][i] = e;
    }
    UltraSpace out(std::move(labels), std::move(m));
    const auto check = verify_ultrametric(out);
    if (!check.ok)
        throw IsometryFailure("sentinel extension broke the ultrametric law at triple (" +
                              out.labels()[check.x] + ", " + out.labels()[check.y] + ", " +
                              out.labels()[check.z] + ")");
    return out;
}

/// Random ultrametric space from a random rooted tree: each point is a leaf
/// addressed by a digit string of the given depth, and the distance exponent
/// of two points is the depth of their lowest common ancestor (the shared
/// prefix length). Points with identical addresses sit at exponent `depth`,
/// still a positive distance. Deterministic for a fixed seed.
inline UltraSpace random_ultrametric(std::size_t n, std::size_t depth, std::uint64_t seed) {
    if (n < 1) throw DomainError("need at least one point");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::uint32_t> branch(0, 2);
    std::vector<std::vector<std::uint32_t>> addr(n, std::vector<std::uint32_t>(depth));
    for (auto& a : addr)
        for (auto& d : a) d = branch(rng);

    std::vector<std::string> labels;
    labels.reserve(n);
    for (std::size_t i = 0; i < n; ++i) labels.push_back("x" + std::to_string(i));
    std::vector<std::vector<Exponent>> m(n, std::vector<Exponent>(n, Exponent::infinity()));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            std::size_t k = 0;
            while (k < depth && addr[i][k] == addr[j][k]) ++k;
            m[i][j] = Exponent(Rational(static_cast<std::int64_t>(k)));
            m[j][i] = m[i][j];
        }
    return UltraSpace(std::move(labels), std::move(m));
}

/// Order-preserving relabeling of the distance exponents; the k-th smallest
/// distinct exponent is replaced by levels[k]. Ultrametricity only depends on
/// the order, so any strictly increasing relabeling is safe; the verifier is
/// still re-run. Used to turn integer tree depths into rational-valued
/// corpora.
inline UltraSpace remap_exponents(const UltraSpace& s, const std::vector<Rational>& levels) {
    std::set<Rational> distinct;
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = i + 1; j < s.size(); ++j) distinct.insert(s.g(i, j).finite());
    if (levels.size() < distinct.size())
        throw DomainError("not enough levels: need " + std::to_string(distinct.size()));
    for (std::size_t k = 1; k < levels.size(); ++k)
        if (!(levels[k - 1] < levels[k])) throw DomainError("levels must be strictly increasing");

    std::vector<Rational> sorted(distinct.begin(), distinct.end());
    auto lookup = [&](const Exponent& e) -> Exponent {
        if (e.is_inf()) return e;
        const auto it = std::lower_bound(sorted.begin(), sorted.end(), e.finite());
        return Exponent(levels[static_cast<std::size_t>(it - sorted.begin())]);
    };
    std::vector<std::vector<Exponent>> m(s.size(), std::vector<Exponent>(s.size(), Exponent::infinity()));
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = 0; j < s.size(); ++j)
            if (i != j) m[i][j] = lookup(s.g(i, j));
    UltraSpace out(s.labels(), std::move(m));
    const auto check = verify_ultrametric(out);
    if (!check.ok) throw IsometryFailure("exponent remap broke the ultrametric law");
    return out;
}

} // namespace lcf
