#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "exponent.hpp"
#include "padic.hpp"
#include "series.hpp"

namespace lcf {

/// Mixed-characteristic (p-adic Hahn / p-adic Levi-Civita) arithmetic.
///
/// Elements are always stored normalized: every coefficient is a digit, i.e.
/// a residue standing for its Teichmuller representative in the fixed system
/// J, or a generator symbol standing for the lift of a transcendental
/// residue. The quotient by the ideal of telescoping relations
/// sum_n alpha_{g+n} p^n = 0 is realized by carry normalization rather than
/// by coset bookkeeping: at exponent g with accumulated value c, the digit
/// d = c mod p is emitted and (c - omega(d))/p carries to exponent g+1.
/// Working precision is tracked per value; a digit below the truncation
/// order that cannot be determined raises PrecisionLoss.

namespace pdetail {

struct Slot {
    enum class Kind { Digit, Gen, ExactInt, Approx };
    Kind kind;
    std::uint32_t digit = 0;
    std::uint32_t gen = 0;
    std::int64_t exact = 0;           // true signed integer value
    std::optional<PadicInt> approx;   // residue with finite digit precision
};

/// omega(d) as an exact signed integer where one exists: 0, 1, and -1 for
/// d = p-1 (p odd). Everything else is a genuinely infinite p-adic unit.
inline std::optional<std::int64_t> exact_omega(std::uint32_t d, std::uint32_t p) {
    if (d == 0) return 0;
    if (d == 1) return 1;
    if (p > 2 && d == p - 1) return -1;
    return std::nullopt;
}

inline std::uint32_t digit_precision(const Rational& g, const Exponent& trunc, std::uint32_t p) {
    const std::int64_t need = digit_slots_below(g, trunc);
    const std::uint32_t cap = PadicInt::max_precision(p);
    if (need > cap)
        throw PrecisionLoss("truncation " + trunc.str() + " needs " + std::to_string(need) +
                            " base-" + std::to_string(p) + " digits; 64-bit window holds " +
                            std::to_string(cap));
    return static_cast<std::uint32_t>(need);
}

inline Slot exact_slot(std::int64_t v) { return Slot{Slot::Kind::ExactInt, 0, 0, v, std::nullopt}; }
inline Slot approx_slot(PadicInt v) {
    return Slot{Slot::Kind::Approx, 0, 0, 0, std::move(v)};
}

/// Lowers a slot to numeric form (ExactInt stays exact; Digit becomes exact
/// when omega(d) is an exact integer, otherwise a residue good for the
/// digits below trunc).
inline Slot to_numeric(const Slot& s, const Rational& g, const Exponent& trunc, std::uint32_t p) {
    switch (s.kind) {
    case Slot::Kind::ExactInt:
    case Slot::Kind::Approx: return s;
    case Slot::Kind::Digit: {
        if (auto w = exact_omega(s.digit, p)) return exact_slot(*w);
        if (trunc.is_inf())
            throw PrecisionLoss("omega(" + std::to_string(s.digit) + ") has an infinite digit "
                                "expansion; a finite truncation order is required");
        const std::uint32_t w = digit_precision(g, trunc, p);
        if (w == 0) return exact_slot(0); // beyond trunc, irrelevant
        return approx_slot(teichmuller(s.digit, p, w));
    }
    case Slot::Kind::Gen:
        throw UnsupportedSymbolic("a numeric carry collides with a transcendental digit");
    }
    throw DomainError("unreachable slot kind");
}

inline Slot merge_slots(const Slot& a, const Slot& b, const Rational& g, const Exponent& trunc,
                        std::uint32_t p) {
    if (a.kind == Slot::Kind::Gen || b.kind == Slot::Kind::Gen)
        throw UnsupportedSymbolic("cannot combine a transcendental digit with another value");
    const Slot na = to_numeric(a, g, trunc, p);
    const Slot nb = to_numeric(b, g, trunc, p);
    if (na.kind == Slot::Kind::ExactInt && nb.kind == Slot::Kind::ExactInt) {
        const std::int64_t sum = na.exact + nb.exact; // desk-scale values, no overflow risk
        return exact_slot(sum);
    }
    const auto lower = [&](const Slot& s, std::uint32_t prec) {
        return s.kind == Slot::Kind::Approx ? *s.approx : PadicInt::of_int(p, prec, s.exact);
    };
    std::uint32_t prec = UINT32_MAX;
    if (na.kind == Slot::Kind::Approx) prec = std::min(prec, na.approx->precision());
    if (nb.kind == Slot::Kind::Approx) prec = std::min(prec, nb.approx->precision());
    return approx_slot(padic_add(lower(na, prec), lower(nb, prec)));
}

inline void push_slot(std::map<Rational, Slot>& slots, const Rational& g, Slot s,
                      const Exponent& trunc, std::uint32_t p) {
    auto it = slots.find(g);
    if (it == slots.end()) {
        slots.emplace(g, std::move(s));
    } else {
        it->second = merge_slots(it->second, s, g, trunc, p);
    }
}

/// The carry loop of the standard-representation rewriting. Consumes the
/// slot map in increasing exponent order and emits digit terms strictly
/// below trunc.
inline std::vector<Term> run_carries(std::map<Rational, Slot>&& slots, std::uint32_t p,
                                     const Exponent& trunc) {
    std::vector<Term> out;
    while (!slots.empty()) {
        const auto it = slots.begin();
        const Rational g = it->first;
        Slot s = std::move(it->second);
        slots.erase(it);
        if (!(Exponent(g) < trunc)) break; // all remaining slots are >= trunc

        switch (s.kind) {
        case Slot::Kind::Digit:
            if (s.digit != 0) out.push_back(Term{g, Coefficient::prime_field(p, s.digit)});
            continue;
        case Slot::Kind::Gen:
            out.push_back(Term{g, Coefficient::generator(s.gen)});
            continue;
        case Slot::Kind::ExactInt: {
            const std::int64_t c = s.exact;
            if (c == 0) continue;
            const std::uint32_t d = static_cast<std::uint32_t>(((c % p) + p) % p);
            const auto w = exact_omega(d, p);
            if (!w) {
                // the chain leaves the exactly liftable digits; fall back to
                // residue arithmetic wide enough to reach the truncation
                if (trunc.is_inf())
                    throw PrecisionLoss("exact integer " + std::to_string(c) +
                                        " has an infinite standard representation; a finite "
                                        "truncation order is required");
                const std::uint32_t prec = digit_precision(g, trunc, p);
                push_slot(slots, g, approx_slot(PadicInt::of_int(p, prec, c)), trunc, p);
                continue;
            }
            if (d != 0) out.push_back(Term{g, Coefficient::prime_field(p, d)});
            const std::int64_t carry = (c - *w) / p;
            if (carry != 0) {
                if (trunc.is_inf() && p == 2 && carry == c)
                    throw PrecisionLoss("-1 has an infinite standard representation in "
                                        "characteristic 2; a finite truncation order is required");
                push_slot(slots, g + Rational(1), exact_slot(carry), trunc, p);
            }
            continue;
        }
        case Slot::Kind::Approx: {
            const PadicInt c = *s.approx;
            const std::uint32_t k = c.precision();
            const std::uint32_t d = static_cast<std::uint32_t>(c.value() % p);
            if (d != 0) out.push_back(Term{g, Coefficient::prime_field(p, d)});
            if (k == 1) {
                if (Exponent(g + Rational(1)) < trunc)
                    throw PrecisionLoss("digit at exponent " + (g + Rational(1)).str() +
                                        " is below the truncation order but not determined "
                                        "by the operand precision");
                continue;
            }
            const PadicInt w = teichmuller(d, p, k);
            const std::uint64_t diff = padic_sub(c, w).value();
            const PadicInt carry(p, k - 1, diff / p);
            push_slot(slots, g + Rational(1), approx_slot(carry), trunc, p);
            continue;
        }
        }
    }
    return out;
}

inline Slot ingest(const Coefficient& c, const Rational& g, std::uint32_t p,
                   const Exponent& trunc) {
    using K = Coefficient::Kind;
    switch (c.kind()) {
    case K::PrimeField:
        if (c.pf_p() != p) throw DomainError("digit from the wrong prime field");
        return Slot{Slot::Kind::Digit, c.pf_residue(), 0, 0, std::nullopt};
    case K::Generator: return Slot{Slot::Kind::Gen, 0, c.gen_index(), 0, std::nullopt};
    case K::PadicWord: {
        if (c.pw_p() != p) throw DomainError("p-adic word from the wrong prime");
        const auto& ds = c.pw_digits();
        PadicInt v(p, static_cast<std::uint32_t>(ds.size()), 0);
        std::uint64_t acc = 0, scale = 1;
        for (std::size_t i = 0; i < ds.size(); ++i) {
            acc = (acc + detail::mulmod(ds[i], scale, v.modulus())) % v.modulus();
            scale = detail::mulmod(scale, p, v.modulus());
        }
        return approx_slot(PadicInt(p, static_cast<std::uint32_t>(ds.size()), acc));
    }
    case K::Rational: {
        const Rational r = c.rat();
        if (r.den_big() % p == 0)
            throw DomainError("coefficient denominator divisible by p; in mixed characteristic "
                              "tau = p, shift the exponent instead");
        // small integers run the exact carry chain; everything else goes
        // through residue arithmetic wide enough for the truncation
        constexpr std::int64_t kExactCap = std::int64_t(1) << 40;
        if (r.is_integer() && r.num_big() > -kExactCap && r.num_big() < kExactCap)
            return exact_slot(r.num());
        if (trunc.is_inf())
            throw PrecisionLoss("non-integer rational coefficients need a finite truncation");
        const std::uint32_t w = digit_precision(g, trunc, p);
        if (w == 0) return exact_slot(0);
        PadicInt probe(p, w, 0);
        const PadicInt num(p, w, r.num_mod(probe.modulus()));
        const PadicInt den(p, w, r.den_mod(probe.modulus()));
        return approx_slot(padic_divexact(num, den));
    }
    }
    throw DomainError("unreachable coefficient kind");
}

} // namespace pdetail

/// Rewrites a raw term list with p-adic integer (or exact rational, digit,
/// generator) coefficients into the standard representation with digits in
/// the Teichmuller system J, up to the truncation order. Exponents of the
/// raw list must be strictly increasing. supp(result) is contained in
/// supp(raw) + Z_{>=0}.
inline Series normalize_padic(const std::vector<Term>& raw, std::uint32_t p,
                              const Exponent& trunc) {
    if (!is_prime(p)) throw DomainError("mixed characteristic requires a prime");
    std::map<Rational, pdetail::Slot> slots;
    const Rational* prev = nullptr;
    for (const auto& t : raw) {
        if (prev && !(*prev < t.exponent))
            throw DomainError("raw term exponents must be strictly increasing");
        prev = &t.exponent;
        if (t.coef.is_zero()) continue;
        slots.emplace(t.exponent, pdetail::ingest(t.coef, t.exponent, p, trunc));
    }
    auto terms = pdetail::run_carries(std::move(slots), p, trunc);
    return Series(CharMode::mixed(p), std::move(terms), trunc);
}

namespace pdetail {

inline void require_mixed(const Series& x, const char* op) {
    if (!x.mode().is_mixed())
        throw DomainError(std::string(op) + " expects mixed-characteristic operands");
}

enum class POp { Add, Sub };

inline Series pseries_linear(const Series& x, const Series& y, POp op) {
    require_mixed(x, "pseries_add/sub");
    detail::require_same_mode(x, y);
    const std::uint32_t p = x.mode().residue_char();
    const Exponent trunc = exp_min(x.trunc(), y.trunc());
    std::map<Rational, Slot> slots;

    auto ix = x.terms().begin(), iy = y.terms().begin();
    while (ix != x.terms().end() || iy != y.terms().end()) {
        const bool tx = ix != x.terms().end();
        const bool ty = iy != y.terms().end();
        if (tx && (!ty || ix->exponent < iy->exponent)) {
            if (Exponent(ix->exponent) < trunc)
                push_slot(slots, ix->exponent, ingest(ix->coef, ix->exponent, p, trunc), trunc, p);
            ++ix;
        } else if (ty && (!tx || iy->exponent < ix->exponent)) {
            if (Exponent(iy->exponent) < trunc) {
                Slot s = ingest(iy->coef, iy->exponent, p, trunc);
                if (op == POp::Sub) {
                    // -omega(d) = omega(p-d) for odd p; in characteristic 2 fall
                    // back to the exact integer -1 chain
                    if (s.kind == Slot::Kind::Gen)
                        throw UnsupportedSymbolic("negation of a transcendental digit");
                    if (s.kind == Slot::Kind::Digit) {
                        if (p > 2) s.digit = (p - s.digit) % p;
                        else s = exact_slot(-std::int64_t(exact_omega(s.digit, p).value()));
                    }
                }
                push_slot(slots, iy->exponent, std::move(s), trunc, p);
            }
            ++iy;
        } else {
            // shared exponent: cancel identical coefficients exactly before
            // going numeric (this covers generator-generator cancellation)
            if (op == POp::Sub && coeff_eq(ix->coef, iy->coef)) {
                ++ix, ++iy;
                continue;
            }
            if (Exponent(ix->exponent) < trunc) {
                Slot a = ingest(ix->coef, ix->exponent, p, trunc);
                Slot b = ingest(iy->coef, iy->exponent, p, trunc);
                if (op == POp::Sub) {
                    if (b.kind == Slot::Kind::Gen)
                        throw UnsupportedSymbolic(
                            "difference of distinct transcendental digits is not representable; "
                            "use dist_valuation for first-difference queries");
                    if (b.kind == Slot::Kind::Digit) {
                        if (p > 2) b.digit = (p - b.digit) % p;
                        else b = exact_slot(-std::int64_t(exact_omega(b.digit, p).value()));
                    } else if (b.kind == Slot::Kind::ExactInt) {
                        b.exact = -b.exact;
                    } else {
                        const PadicInt v = *b.approx;
                        b = approx_slot(padic_sub(PadicInt(p, v.precision(), 0), v));
                    }
                }
                push_slot(slots, ix->exponent, std::move(a), trunc, p);
                push_slot(slots, ix->exponent, std::move(b), trunc, p);
            }
            ++ix, ++iy;
        }
    }
    auto terms = run_carries(std::move(slots), p, trunc);
    return Series(x.mode(), std::move(terms), trunc);
}

} // namespace pdetail

inline Series pseries_add(const Series& x, const Series& y) {
    return pdetail::pseries_linear(x, y, pdetail::POp::Add);
}
inline Series pseries_sub(const Series& x, const Series& y) {
    return pdetail::pseries_linear(x, y, pdetail::POp::Sub);
}

/// Hahn-ring convolution followed by normalization. Digit products stay
/// symbolic via multiplicativity omega(a)omega(b) = omega(ab); only exponent
/// collisions go through numeric carries. Products involving generator
/// digits are not supported.
inline Series pseries_mul(const Series& x, const Series& y) {
    pdetail::require_mixed(x, "pseries_mul");
    detail::require_same_mode(x, y);
    const std::uint32_t p = x.mode().residue_char();
    const Exponent trunc =
        exp_min(valuation_lower_bound(x) + y.trunc(), valuation_lower_bound(y) + x.trunc());
    for (const auto& t : x.terms())
        if (t.coef.kind() == Coefficient::Kind::Generator)
            throw UnsupportedSymbolic("product with transcendental digits is not supported");
    for (const auto& t : y.terms())
        if (t.coef.kind() == Coefficient::Kind::Generator)
            throw UnsupportedSymbolic("product with transcendental digits is not supported");

    std::map<Rational, pdetail::Slot> slots;
    for (const auto& tx : x.terms()) {
        for (const auto& ty : y.terms()) {
            const Rational g = tx.exponent + ty.exponent;
            if (!(Exponent(g) < trunc)) continue;
            const std::uint32_t d =
                static_cast<std::uint32_t>(std::uint64_t(tx.coef.pf_residue()) *
                                           ty.coef.pf_residue() % p);
            pdetail::push_slot(slots, g,
                               pdetail::Slot{pdetail::Slot::Kind::Digit, d, 0, 0, std::nullopt},
                               trunc, p);
        }
    }
    auto terms = pdetail::run_carries(std::move(slots), p, trunc);
    return Series(x.mode(), std::move(terms), trunc);
}

/// Multiplicative inverse up to x * y = 1 + O(tau^order). Factors out the
/// leading digit monomial (whose inverse is again a digit, by
/// multiplicativity), inverts the unit part by the geometric series in
/// residue arithmetic, and normalizes.
inline Series pseries_invert(const Series& x, const Exponent& order) {
    pdetail::require_mixed(x, "pseries_invert");
    if (order.is_inf()) throw DomainError("inversion needs a finite order");
    const std::uint32_t p = x.mode().residue_char();
    const Exponent v = valuation(x); // PrecisionLoss if indeterminate
    if (v.is_inf()) throw DivisionByZero("inverting the zero element");
    const Rational m = v.finite();
    if (!x.trunc().is_inf() && x.trunc() - v < order)
        throw PrecisionLoss("element known to relative order " + (x.trunc() - v).str() +
                            ", requested " + order.str());
    for (const auto& t : x.terms())
        if (t.coef.kind() == Coefficient::Kind::Generator)
            throw UnsupportedSymbolic("inversion with transcendental digits is not supported");

    const std::uint32_t dm = x.terms().front().coef.pf_residue();
    std::uint64_t dm_inv = 1; // d^{p-2} mod p
    {
        std::uint64_t b = dm, e = p - 2;
        while (e) {
            if (e & 1) dm_inv = dm_inv * b % p;
            b = b * b % p;
            e >>= 1;
        }
    }

    // single digit monomial: the inverse is exact
    if (x.terms().size() == 1) {
        return Series::monomial(x.mode(), -m, Coefficient::prime_field(p, dm_inv), order - v);
    }

    if (!(Rational(0) < order.finite()))
        throw DomainError("inversion of a non-monomial needs a positive order");
    const std::uint32_t W = pdetail::digit_precision(Rational(0), order, p);
    PadicInt probe(p, W, 0);
    const std::uint64_t mod = probe.modulus();
    const std::uint64_t wdm_inv = teichmuller(static_cast<std::uint32_t>(dm_inv), p, W).value();

    using RawTerm = std::pair<Rational, PadicInt>;
    // u = 1 - omega(dm)^{-1} tau^{-m} x; exponents below are already the
    // absolute exponents of the product x * y
    std::vector<RawTerm> u;
    for (std::size_t i = 1; i < x.terms().size(); ++i) {
        const auto& t = x.terms()[i];
        const Rational e = t.exponent - m;
        if (!(Exponent(e) < order)) continue;
        const std::uint64_t w = teichmuller(t.coef.pf_residue(), p, W).value();
        const std::uint64_t val = (mod - detail::mulmod(wdm_inv, w, mod)) % mod;
        u.emplace_back(e, PadicInt(p, W, val));
    }

    const auto raw_mul = [&](const std::vector<RawTerm>& a,
                             const std::vector<RawTerm>& b) {
        std::map<Rational, PadicInt> acc;
        for (const auto& [ga, ca] : a)
            for (const auto& [gb, cb] : b) {
                const Rational g = ga + gb;
                if (!(Exponent(g) < order)) continue;
                const PadicInt prod = padic_mul(ca, cb);
                auto it = acc.find(g);
                if (it == acc.end()) acc.emplace(g, prod);
                else it->second = padic_add(it->second, prod);
            }
        std::vector<RawTerm> out;
        for (auto& [g, c] : acc)
            if (!c.is_zero()) out.emplace_back(g, c);
        return out;
    };

    std::map<Rational, PadicInt> sum;
    sum.emplace(Rational(0), PadicInt(p, W, 1));
    std::vector<RawTerm> power(sum.begin(), sum.end());
    while (!power.empty()) {
        power = raw_mul(power, u);
        for (const auto& [g, c] : power) {
            auto it = sum.find(g);
            if (it == sum.end()) sum.emplace(g, c);
            else it->second = padic_add(it->second, c);
        }
    }

    std::map<Rational, pdetail::Slot> slots;
    const Exponent ytrunc = order - v;
    for (const auto& [g, c] : sum) {
        const PadicInt scaled = padic_mul(c, PadicInt(p, W, wdm_inv));
        if (scaled.is_zero()) continue;
        slots.emplace(g - m, pdetail::approx_slot(scaled));
    }
    auto terms = pdetail::run_carries(std::move(slots), p, ytrunc);
    return Series(x.mode(), std::move(terms), ytrunc);
}

} // namespace lcf
