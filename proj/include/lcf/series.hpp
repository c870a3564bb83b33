#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "charmode.hpp"
#include "coefficient.hpp"
#include "errors.hpp"
#include "exponent.hpp"

namespace lcf {

struct Term {
    Rational exponent;
    Coefficient coef;
};

/// Truncated Hahn / Levi-Civita element: a finite exponent-sorted term list
/// a = sum a_g tau^g, tagged with a characteristic mode and a truncation
/// order. Terms at or beyond trunc are unknown (the big-O marker); INF trunc
/// means the element is known exactly. Invariants: exponents strictly
/// increasing, coefficients nonzero and from the mode's residue domain, all
/// stored exponents < trunc. Values are immutable after construction.
///
/// In mixed characteristic the stored form is the standard representation:
/// every coefficient is a digit (an element of the fixed representative
/// system J) or a generator symbol standing for one.
class Series {
public:
    Series(CharMode mode, std::vector<Term> terms, Exponent trunc)
        : mode_(mode), trunc_(trunc) {
        std::stable_sort(terms.begin(), terms.end(),
                         [](const Term& a, const Term& b) { return a.exponent < b.exponent; });
        terms_.reserve(terms.size());
        for (auto& t : terms) {
            if (t.coef.is_zero()) continue;
            if (!(Exponent(t.exponent) < trunc_)) continue; // beyond the knowledge cutoff
            if (!coefficient_fits(mode_, t.coef))
                throw DomainError("coefficient " + t.coef.str() + " does not fit " + mode_.str());
            if (!terms_.empty() && terms_.back().exponent == t.exponent)
                throw DomainError("duplicate exponent " + t.exponent.str() + " in term list");
            terms_.push_back(std::move(t));
        }
    }

    static Series zero(CharMode mode, Exponent trunc = Exponent::infinity()) {
        return Series(mode, {}, trunc);
    }
    /// The canonical injection g -> c * tau^g.
    static Series monomial(CharMode mode, Rational g, Coefficient c,
                           Exponent trunc = Exponent::infinity()) {
        return Series(mode, {Term{g, std::move(c)}}, trunc);
    }

    const CharMode& mode() const { return mode_; }
    const std::vector<Term>& terms() const { return terms_; }
    const Exponent& trunc() const { return trunc_; }

    std::optional<Coefficient> coefficient_at(const Rational& g) const {
        const auto it = std::lower_bound(
            terms_.begin(), terms_.end(), g,
            [](const Term& t, const Rational& x) { return t.exponent < x; });
        if (it != terms_.end() && it->exponent == g) return it->coef;
        return std::nullopt;
    }

    /// Support as an exponent list (strictly increasing by construction).
    std::vector<Rational> support() const {
        std::vector<Rational> s;
        s.reserve(terms_.size());
        for (const auto& t : terms_) s.push_back(t.exponent);
        return s;
    }

private:
    CharMode mode_;
    std::vector<Term> terms_;
    Exponent trunc_;
};

/// v(a) = min supp(a). INF for the exact zero element. If the series has no
/// terms but is only known up to a finite order, the valuation is
/// indeterminate at this precision.
inline Exponent valuation(const Series& x) {
    if (!x.terms().empty()) return Exponent(x.terms().front().exponent);
    if (x.trunc().is_inf()) return Exponent::infinity();
    throw PrecisionLoss("series is zero up to order " + x.trunc().str() +
                        "; valuation indeterminate");
}

/// Lower bound on the valuation that never throws: min supp, or the
/// truncation order when no term is known.
inline Exponent valuation_lower_bound(const Series& x) {
    if (!x.terms().empty()) return Exponent(x.terms().front().exponent);
    return x.trunc();
}

/// Keeps exactly the terms with exponent strictly below m. The result's
/// truncation never claims more knowledge than the input had.
inline Series truncate_below(const Series& x, const Exponent& m) {
    std::vector<Term> out;
    for (const auto& t : x.terms()) {
        if (!(Exponent(t.exponent) < m)) break;
        out.push_back(t);
    }
    return Series(x.mode(), std::move(out), exp_min(m, x.trunc()));
}

/// Keeps the terms whose exponent lies in S.
inline Series restrict_support(const Series& x, const ExponentSet& S) {
    std::vector<Term> out;
    for (const auto& t : x.terms())
        if (S.contains(t.exponent)) out.push_back(t);
    return Series(x.mode(), std::move(out), x.trunc());
}

/// Valuation of x - y computed digitwise: the least exponent where the two
/// coefficient sequences differ. This avoids materializing differences of
/// generator symbols, and in mixed characteristic it is exactly v(x - y)
/// because the first differing digits differ as residues, making the
/// difference a unit there. Returns INF only when both elements are exact
/// and equal; raises PrecisionLoss when they agree up to the common
/// truncation but are not known further.
inline Exponent dist_valuation(const Series& x, const Series& y) {
    if (!(x.mode() == y.mode())) throw DomainError("dist_valuation across modes");
    const Exponent bound = exp_min(x.trunc(), y.trunc());
    auto ix = x.terms().begin(), iy = y.terms().begin();
    while (ix != x.terms().end() || iy != y.terms().end()) {
        Rational g;
        if (ix == x.terms().end()) g = iy->exponent;
        else if (iy == y.terms().end()) g = ix->exponent;
        else g = std::min(ix->exponent, iy->exponent);
        if (!(Exponent(g) < bound)) break;

        const bool hx = ix != x.terms().end() && ix->exponent == g;
        const bool hy = iy != y.terms().end() && iy->exponent == g;
        if (hx && hy) {
            if (!coeff_eq(ix->coef, iy->coef)) return Exponent(g);
            ++ix, ++iy;
        } else {
            return Exponent(g); // nonzero against zero
        }
    }
    if (bound.is_inf()) return Exponent::infinity();
    throw PrecisionLoss("elements agree up to the common truncation " + bound.str());
}

/// Three-valued equality of truncated elements: equal / distinct up to the
/// common truncation, or unknown beyond it.
enum class SeriesEq { Equal, Distinct, Unknown };

inline SeriesEq series_compare(const Series& x, const Series& y) {
    try {
        return dist_valuation(x, y).is_inf() ? SeriesEq::Equal : SeriesEq::Distinct;
    } catch (const PrecisionLoss&) {
        return SeriesEq::Unknown;
    }
}

/// Structural identity: same terms and same truncation.
inline bool series_identical(const Series& x, const Series& y) {
    if (!(x.mode() == y.mode()) || !(x.trunc() == y.trunc())) return false;
    if (x.terms().size() != y.terms().size()) return false;
    for (std::size_t i = 0; i < x.terms().size(); ++i)
        if (!(x.terms()[i].exponent == y.terms()[i].exponent) ||
            !coeff_eq(x.terms()[i].coef, y.terms()[i].coef))
            return false;
    return true;
}

namespace detail {

inline void require_equal_char(const Series& x, const char* op) {
    if (x.mode().is_mixed())
        throw DomainError(std::string(op) +
                          " is equal-characteristic only; use the pseries_* operations "
                          "for mixed characteristic");
}

inline void require_same_mode(const Series& x, const Series& y) {
    if (!(x.mode() == y.mode())) throw DomainError("series modes differ");
}

} // namespace detail

/// Coefficient-wise sum. The result is known up to min of the inputs'
/// truncations; knowledge is never extended.
inline Series series_add(const Series& x, const Series& y) {
    detail::require_same_mode(x, y);
    detail::require_equal_char(x, "series_add");
    const Exponent trunc = exp_min(x.trunc(), y.trunc());
    std::vector<Term> out;
    auto ix = x.terms().begin(), iy = y.terms().begin();
    while (ix != x.terms().end() || iy != y.terms().end()) {
        if (iy == y.terms().end() || (ix != x.terms().end() && ix->exponent < iy->exponent)) {
            out.push_back(*ix++);
        } else if (ix == x.terms().end() || iy->exponent < ix->exponent) {
            out.push_back(*iy++);
        } else {
            Coefficient c = coeff_add(ix->coef, iy->coef);
            if (!c.is_zero()) out.push_back(Term{ix->exponent, std::move(c)});
            ++ix, ++iy;
        }
    }
    return Series(x.mode(), std::move(out), trunc);
}

inline Series series_negate(const Series& x) {
    detail::require_equal_char(x, "series_negate");
    std::vector<Term> out;
    out.reserve(x.terms().size());
    const Coefficient zero = domain_zero(x.mode());
    for (const auto& t : x.terms()) out.push_back(Term{t.exponent, coeff_sub(zero, t.coef)});
    return Series(x.mode(), std::move(out), x.trunc());
}

inline Series series_sub(const Series& x, const Series& y) {
    detail::require_same_mode(x, y);
    detail::require_equal_char(x, "series_sub");
    const Exponent trunc = exp_min(x.trunc(), y.trunc());
    std::vector<Term> out;
    auto ix = x.terms().begin(), iy = y.terms().begin();
    const Coefficient zero = domain_zero(x.mode());
    while (ix != x.terms().end() || iy != y.terms().end()) {
        if (iy == y.terms().end() || (ix != x.terms().end() && ix->exponent < iy->exponent)) {
            out.push_back(*ix++);
        } else if (ix == x.terms().end() || iy->exponent < ix->exponent) {
            // cancellation of identical generators happens in the merged branch;
            // a lone generator on the right cannot be negated
            out.push_back(Term{iy->exponent, coeff_sub(zero, iy->coef)});
            ++iy;
        } else {
            if (!coeff_eq(ix->coef, iy->coef)) {
                Coefficient c = coeff_sub(ix->coef, iy->coef);
                if (!c.is_zero()) out.push_back(Term{ix->exponent, std::move(c)});
            }
            ++ix, ++iy;
        }
    }
    return Series(x.mode(), std::move(out), trunc);
}

/// Hahn product: convolution over exponent sums. The product's truncation is
/// the worst-case min over v(x)+trunc(y) and v(y)+trunc(x).
inline Series series_mul(const Series& x, const Series& y) {
    detail::require_same_mode(x, y);
    detail::require_equal_char(x, "series_mul");
    const Exponent trunc =
        exp_min(valuation_lower_bound(x) + y.trunc(), valuation_lower_bound(y) + x.trunc());
    std::map<Rational, Coefficient> acc;
    for (const auto& tx : x.terms()) {
        for (const auto& ty : y.terms()) {
            const Rational g = tx.exponent + ty.exponent;
            if (!(Exponent(g) < trunc)) continue;
            Coefficient c = coeff_mul(tx.coef, ty.coef);
            auto it = acc.find(g);
            if (it == acc.end()) {
                if (!c.is_zero()) acc.emplace(g, std::move(c));
            } else {
                it->second = coeff_add(it->second, c);
                if (it->second.is_zero()) acc.erase(it);
            }
        }
    }
    std::vector<Term> out;
    out.reserve(acc.size());
    for (auto& [g, c] : acc) out.push_back(Term{g, std::move(c)});
    return Series(x.mode(), std::move(out), trunc);
}

namespace detail {

inline Coefficient coeff_invert(const Coefficient& c) {
    using K = Coefficient::Kind;
    if (c.kind() == K::Rational) return Coefficient::rational(c.rat().reciprocal());
    if (c.kind() == K::PrimeField) {
        if (c.pf_residue() == 0) throw DivisionByZero("inverting zero residue");
        const std::uint32_t p = c.pf_p();
        std::uint64_t r = 1, b = c.pf_residue(), e = p - 2; // Fermat
        while (e) {
            if (e & 1) r = r * b % p;
            b = b * b % p;
            e >>= 1;
        }
        return Coefficient::prime_field(p, r);
    }
    throw UnsupportedSymbolic("leading coefficient " + c.str() + " is not invertible here");
}

} // namespace detail

/// Multiplicative inverse up to the requested order: returns y with
/// x * y = 1 + O(tau^order). Factors x = c tau^m (1 - u) with v(u) > 0 and
/// sums the geometric series until the tail valuation reaches the order.
inline Series series_invert(const Series& x, const Exponent& order) {
    detail::require_equal_char(x, "series_invert");
    if (order.is_inf()) throw DomainError("inversion needs a finite order");
    const Exponent v = valuation(x); // PrecisionLoss if indeterminate
    if (v.is_inf()) throw DivisionByZero("inverting the zero series");
    const Rational m = v.finite();
    if (!x.trunc().is_inf() && x.trunc() - v < order)
        throw PrecisionLoss("series known to relative order " + (x.trunc() - v).str() +
                            ", requested " + order.str());

    const Coefficient c_inv = detail::coeff_invert(x.terms().front().coef);

    // u = 1 - c^{-1} tau^{-m} x, so v(u) > 0; exponents here are already the
    // absolute exponents of the product x*y.
    std::vector<Term> uterms;
    const Coefficient zero = domain_zero(x.mode());
    for (std::size_t i = 1; i < x.terms().size(); ++i) {
        const auto& t = x.terms()[i];
        Coefficient c = coeff_sub(zero, coeff_mul(c_inv, t.coef));
        if (!c.is_zero()) uterms.push_back(Term{t.exponent - m, std::move(c)});
    }
    const Series u(x.mode(), std::move(uterms), order);

    Series sum = Series::monomial(x.mode(), Rational(0), domain_one(x.mode()), order);
    Series power = sum;
    while (!power.terms().empty()) {
        power = truncate_below(series_mul(power, u), order);
        if (power.terms().empty()) break;
        sum = series_add(sum, power);
    }

    std::vector<Term> out;
    out.reserve(sum.terms().size());
    for (const auto& t : sum.terms())
        out.push_back(Term{t.exponent - m, coeff_mul(c_inv, t.coef)});
    return Series(x.mode(), std::move(out), order - v);
}

/// Rendering as a tau-power sum, e.g. "b_1*tau^{1} + 2*tau^{3/2} + O(tau^{4})".
inline std::string series_str(const Series& x) {
    std::string s;
    for (const auto& t : x.terms()) {
        if (!s.empty()) s += " + ";
        s += t.coef.str() + "*tau^{" + t.exponent.str() + "}";
    }
    if (x.terms().empty()) s = "0";
    if (!x.trunc().is_inf()) s += " + O(tau^{" + x.trunc().str() + "})";
    return s;
}

} // namespace lcf
