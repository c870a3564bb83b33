#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "embedding.hpp"
#include "errors.hpp"
#include "exponent.hpp"
#include "series.hpp"
#include "ultraspace.hpp"

namespace lcf {

/// Point of the function-space model N(R, N) of the Urysohn universal
/// ultrametric space: a finite-support map from radii to a countable marker
/// alphabet, stored by exponent g (radius eta^{-g}) with nonzero markers.
/// The marker 0 is the function value "off the support" and is never stored.
/// Finite supports are always tenuous; semi-sporadic infinite supports are
/// not representable here.
class UrysohnPoint {
public:
    UrysohnPoint() = default;
    explicit UrysohnPoint(std::vector<std::pair<Rational, std::uint64_t>> support)
        : support_(std::move(support)) {
        std::sort(support_.begin(), support_.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        for (std::size_t i = 0; i < support_.size(); ++i) {
            if (support_[i].second == 0)
                throw DomainError("marker 0 cannot be stored in a support");
            if (i > 0 && !(support_[i - 1].first < support_[i].first))
                throw DomainError("duplicate exponent in support: " + support_[i].first.str());
        }
    }

    const std::vector<std::pair<Rational, std::uint64_t>>& support() const { return support_; }
    bool empty() const { return support_.empty(); }

    std::uint64_t marker_at(const Rational& g) const {
        const auto it = std::lower_bound(
            support_.begin(), support_.end(), g,
            [](const auto& e, const Rational& x) { return e.first < x; });
        if (it != support_.end() && it->first == g) return it->second;
        return 0;
    }

    friend bool operator==(const UrysohnPoint& a, const UrysohnPoint& b) {
        return a.support_ == b.support_;
    }

private:
    std::vector<std::pair<Rational, std::uint64_t>> support_;
};

/// The Urysohn ultrametric, in exponent form: Delta(f, g) is the largest
/// radius where f and g differ, i.e. the least exponent with differing
/// markers; INF (distance zero) when the functions agree.
inline Exponent delta(const UrysohnPoint& f, const UrysohnPoint& g) {
    auto i = f.support().begin();
    auto j = g.support().begin();
    while (i != f.support().end() || j != g.support().end()) {
        if (j == g.support().end() || (i != f.support().end() && i->first < j->first))
            return Exponent(i->first);
        if (i == f.support().end() || j->first < i->first) return Exponent(j->first);
        if (i->second != j->second) return Exponent(i->first);
        ++i, ++j;
    }
    return Exponent::infinity();
}

/// Countable marker alphabet for translating series coefficients to markers.
/// Residue digits 1..p-1 map to themselves and the generator b_alpha to
/// p + alpha; in equal characteristic zero the rational coefficients come
/// from a declared table. The alphabet stays unbounded on the generator
/// side, honoring card = aleph_0.
class MarkerAlphabet {
public:
    explicit MarkerAlphabet(CharMode mode, std::vector<Rational> rational_table = {})
        : mode_(mode), table_(std::move(rational_table)) {
        for (const auto& r : table_)
            if (r.is_zero()) throw DomainError("alphabet table cannot contain zero");
    }

    const CharMode& mode() const { return mode_; }

    std::uint64_t encode(const Coefficient& c) const {
        const std::uint64_t p = mode_.residue_char();
        switch (c.kind()) {
        case Coefficient::Kind::PrimeField:
            if (p == 0 || c.pf_p() != p) throw AlphabetOverflow("residue from the wrong field");
            return c.pf_residue();
        case Coefficient::Kind::Generator:
            return (p == 0 ? table_.size() + 1 : p) + c.gen_index();
        case Coefficient::Kind::Rational: {
            if (p != 0) throw AlphabetOverflow("rational coefficient in positive characteristic");
            for (std::size_t i = 0; i < table_.size(); ++i)
                if (table_[i] == c.rat()) return i + 1;
            throw AlphabetOverflow("coefficient " + c.str() + " is not in the declared alphabet");
        }
        case Coefficient::Kind::PadicWord:
            throw AlphabetOverflow("raw p-adic words have no marker; normalize first");
        }
        throw AlphabetOverflow("unreachable");
    }

    Coefficient decode(std::uint64_t marker) const {
        if (marker == 0) throw DomainError("marker 0 is not a coefficient");
        const std::uint64_t p = mode_.residue_char();
        if (p == 0) {
            if (marker <= table_.size()) return Coefficient::rational(table_[marker - 1]);
            return Coefficient::generator(static_cast<std::uint32_t>(marker - table_.size() - 1));
        }
        if (marker < p) return Coefficient::prime_field(static_cast<std::uint32_t>(p), marker);
        return Coefficient::generator(static_cast<std::uint32_t>(marker - p));
    }

private:
    CharMode mode_;
    std::vector<Rational> table_;
};

/// The isometry T of the series field onto the function-space model:
/// T(x)(r) = coefficient of x at exponent -log_eta(r). Bijective on elements
/// with tenuous support; delta(T(x), T(y)) equals dist_valuation(x, y).
inline UrysohnPoint to_urysohn(const Series& x, const MarkerAlphabet& alphabet) {
    if (!(x.mode() == alphabet.mode())) throw DomainError("alphabet mode mismatch");
    std::vector<std::pair<Rational, std::uint64_t>> support;
    support.reserve(x.terms().size());
    for (const auto& t : x.terms()) support.emplace_back(t.exponent, alphabet.encode(t.coef));
    return UrysohnPoint(std::move(support));
}

inline Series from_urysohn(const UrysohnPoint& f, const MarkerAlphabet& alphabet,
                           Exponent trunc = Exponent::infinity()) {
    std::vector<Term> terms;
    terms.reserve(f.support().size());
    for (const auto& [g, m] : f.support()) terms.push_back(Term{g, alphabet.decode(m)});
    return Series(alphabet.mode(), std::move(terms), trunc);
}

/// Petal membership: x lies in the S-piece iff its support exponents all
/// belong to S.
inline bool in_piece(const Series& x, const ExponentSet& S) {
    for (const auto& t : x.terms())
        if (!S.contains(t.exponent)) return false;
    return true;
}

struct PetalDistance {
    Exponent exponent;  // INF when x already lies in the piece
    Series witness;     // realizing point with support inside S
};

/// Distance from x to the S-piece, with the realizing witness. In radius
/// terms the distance is the largest offending radius, i.e. the smallest
/// exponent in supp(x) \ S; the witness keeps exactly the S-supported part
/// of x. The distance exponent always lies in supp(x) \ S (axiom P4's
/// "T minus S" in exponent form) or is INF.
inline PetalDistance petal_distance(const Series& x, const ExponentSet& S) {
    std::optional<Rational> m;
    for (const auto& t : x.terms())
        if (!S.contains(t.exponent)) {
            m = t.exponent;
            break;
        }
    if (!m) return PetalDistance{Exponent::infinity(), x};
    return PetalDistance{Exponent(*m), restrict_support(x, S)};
}

/// Finite instance of the injectivity extension: given points realizing the
/// distances of B's prefix, produce a point whose delta-distances to them
/// match B's last row exactly. Same isolated-case rule as the embedding
/// engine: copy the nearest prefix point below the decisive exponent and
/// place a fresh marker there.
inline UrysohnPoint injective_extend(const std::vector<UrysohnPoint>& prefix,
                                     const UltraSpace& B) {
    if (B.size() != prefix.size() + 1)
        throw InconsistentPrefix("space must have exactly one more point than the prefix");
    const auto check = verify_ultrametric(B);
    if (!check.ok)
        throw InconsistentPrefix("space violates the ultrametric law at (" +
                                 B.labels()[check.x] + ", " + B.labels()[check.y] + ", " +
                                 B.labels()[check.z] + ")");
    for (std::size_t i = 0; i < prefix.size(); ++i)
        for (std::size_t j = i + 1; j < prefix.size(); ++j) {
            const Exponent got = delta(prefix[i], prefix[j]);
            if (!(got == B.g(i, j)))
                throw InconsistentPrefix("prefix points " + std::to_string(i) + ", " +
                                         std::to_string(j) + " realize exponent " + got.str() +
                                         ", space wants " + B.g(i, j).str());
        }
    if (prefix.empty()) return UrysohnPoint();

    const std::size_t last = prefix.size();
    std::size_t best = 0;
    Exponent m = B.g(0, last);
    for (std::size_t i = 1; i < prefix.size(); ++i)
        if (m < B.g(i, last)) {
            m = B.g(i, last);
            best = i;
        }
    const Rational mfin = m.finite();

    std::vector<std::pair<Rational, std::uint64_t>> support;
    for (const auto& [g, marker] : prefix[best].support()) {
        if (!(g < mfin)) break;
        support.emplace_back(g, marker);
    }
    // fresh marker: unused at the decisive exponent by any prefix point
    std::uint64_t fresh = 1;
    for (const auto& pt : prefix) fresh = std::max(fresh, pt.marker_at(mfin) + 1);
    support.emplace_back(mfin, fresh);
    UrysohnPoint out{std::move(support)};

    for (std::size_t i = 0; i < prefix.size(); ++i) {
        const Exponent got = delta(out, prefix[i]);
        if (!(got == B.g(i, last)))
            throw IsometryFailure("extension realizes exponent " + got.str() + " to point " +
                                  std::to_string(i) + ", wanted " + B.g(i, last).str());
    }
    return out;
}

} // namespace lcf
