#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "charmode.hpp"
#include "errors.hpp"
#include "exponent.hpp"

namespace lcf {

/// p-adic integer known to N base-p digits: an element of Z_p mod p^N.
/// This is W(F_p), the only instance of the Witt construction that is pinned
/// down algorithmically here; coefficients over larger residue fields are
/// handled symbolically elsewhere. Precision is a per-value attribute fixed
/// at construction; mixed-precision operations coerce down to the minimum.
class PadicInt {
public:
    PadicInt(std::uint32_t p, std::uint32_t precision, std::uint64_t value)
        : p_(p), prec_(precision) {
        if (!is_prime(p)) throw DomainError("p-adic base must be prime");
        if (precision == 0) throw PrecisionLoss("p-adic integer with zero digits of precision");
        mod_ = checked_pow(p, precision);
        value_ = value % mod_;
    }

    static PadicInt of_int(std::uint32_t p, std::uint32_t precision, std::int64_t value) {
        PadicInt r(p, precision, 0);
        const std::int64_t m = static_cast<std::int64_t>(r.mod_);
        std::int64_t v = value % m;
        if (v < 0) v += m;
        r.value_ = static_cast<std::uint64_t>(v);
        return r;
    }

    std::uint32_t p() const { return p_; }
    std::uint32_t precision() const { return prec_; }
    std::uint64_t value() const { return value_; }
    std::uint64_t modulus() const { return mod_; }
    bool is_zero() const { return value_ == 0; }

    /// Largest precision N with p^N < 2^62; the representable digit window.
    static std::uint32_t max_precision(std::uint32_t p) {
        std::uint32_t n = 0;
        unsigned __int128 m = 1;
        const unsigned __int128 cap = (unsigned __int128)1 << 62;
        while (m * p < cap) {
            m *= p;
            ++n;
        }
        return n;
    }

private:
    static std::uint64_t checked_pow(std::uint32_t p, std::uint32_t n) {
        unsigned __int128 m = 1;
        const unsigned __int128 cap = (unsigned __int128)1 << 62;
        for (std::uint32_t i = 0; i < n; ++i) {
            m *= p;
            if (m >= cap) throw PrecisionLoss("p^N exceeds the 64-bit digit window");
        }
        return static_cast<std::uint64_t>(m);
    }

    std::uint32_t p_;
    std::uint32_t prec_;
    std::uint64_t mod_;
    std::uint64_t value_;
};

namespace detail {

inline void require_same_base(const PadicInt& a, const PadicInt& b) {
    if (a.p() != b.p()) throw DomainError("p-adic operands with different primes");
}

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>((unsigned __int128)a * b % m);
}

inline std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

} // namespace detail

inline PadicInt padic_add(const PadicInt& a, const PadicInt& b) {
    detail::require_same_base(a, b);
    const std::uint32_t n = std::min(a.precision(), b.precision());
    PadicInt r(a.p(), n, 0);
    return PadicInt(a.p(), n, (a.value() % r.modulus() + b.value() % r.modulus()) % r.modulus());
}

inline PadicInt padic_sub(const PadicInt& a, const PadicInt& b) {
    detail::require_same_base(a, b);
    const std::uint32_t n = std::min(a.precision(), b.precision());
    PadicInt r(a.p(), n, 0);
    const std::uint64_t m = r.modulus();
    return PadicInt(a.p(), n, (a.value() % m + m - b.value() % m) % m);
}

inline PadicInt padic_mul(const PadicInt& a, const PadicInt& b) {
    detail::require_same_base(a, b);
    const std::uint32_t n = std::min(a.precision(), b.precision());
    PadicInt r(a.p(), n, 0);
    return PadicInt(a.p(), n, detail::mulmod(a.value() % r.modulus(), b.value() % r.modulus(), r.modulus()));
}

/// Exponent of the largest power of p dividing the value. A value that is
/// zero at its precision has valuation >= N, reported as INF (saturated).
inline Exponent padic_valuation(const PadicInt& a) {
    if (a.is_zero()) return Exponent::infinity();
    std::uint64_t v = a.value();
    std::int64_t n = 0;
    while (v % a.p() == 0) {
        v /= a.p();
        ++n;
    }
    return Exponent(Rational(n));
}

/// Exact division: requires v_p(b) <= v_p(a) and b nonzero at its precision.
/// The quotient loses v_p(b) digits of precision.
inline PadicInt padic_divexact(const PadicInt& a, const PadicInt& b) {
    detail::require_same_base(a, b);
    if (b.is_zero()) throw DivisionByZero("p-adic division by zero");
    const std::uint32_t n = std::min(a.precision(), b.precision());
    const Exponent va = padic_valuation(a), vb = padic_valuation(b);
    if (va < vb) throw DomainError("p-adic division is not exact: v(a) < v(b)");
    const std::int64_t k = vb.finite().num();
    if (static_cast<std::uint32_t>(k) >= n)
        throw PrecisionLoss("quotient would have no digits of precision");
    const std::uint32_t nq = n - static_cast<std::uint32_t>(k);

    std::uint64_t pk = 1;
    for (std::int64_t i = 0; i < k; ++i) pk *= b.p();
    PadicInt r(a.p(), nq, 0);
    const std::uint64_t m = r.modulus();
    const std::uint64_t au = (a.value() / pk) % m;
    const std::uint64_t bu = (b.value() / pk) % m;
    // unit inverse mod p^nq via Euler: bu^(phi(p^nq)-1)
    const std::uint64_t phi = m / b.p() * (b.p() - 1);
    const std::uint64_t inv = detail::powmod(bu, phi - 1, m);
    return PadicInt(a.p(), nq, detail::mulmod(au, inv, m));
}

/// The Teichmuller representative of a residue a mod p: the unique lift with
/// omega == a mod p and omega^p == omega mod p^N, computed by iterating the
/// Frobenius x -> x^p to its fixed point.
inline PadicInt teichmuller(std::uint32_t a, std::uint32_t p, std::uint32_t precision) {
    if (a >= p) throw DomainError("residue out of range for Teichmuller lift");
    PadicInt probe(p, precision, 0);
    const std::uint64_t m = probe.modulus();
    std::uint64_t x = a % m;
    for (std::uint32_t i = 0; i <= precision; ++i) {
        const std::uint64_t next = detail::powmod(x, p, m);
        if (next == x) break;
        x = next;
    }
    return PadicInt(p, precision, x);
}

/// Teichmuller digit expansion: the unique residues d_0..d_{N-1} with
/// a = sum omega(d_i) p^i mod p^N. Computed by repeatedly stripping the lift
/// of the mod-p residue and dividing by p.
inline std::vector<std::uint32_t> teich_digits(const PadicInt& a) {
    std::vector<std::uint32_t> out;
    out.reserve(a.precision());
    std::uint64_t v = a.value();
    for (std::uint32_t i = 0; i < a.precision(); ++i) {
        const std::uint32_t rem = a.precision() - i;
        PadicInt probe(a.p(), rem, 0);
        const std::uint64_t m = probe.modulus();
        const std::uint32_t d = static_cast<std::uint32_t>(v % a.p());
        out.push_back(d);
        const std::uint64_t w = teichmuller(d, a.p(), rem).value();
        v = ((v % m) + m - w) % m / a.p();
    }
    return out;
}

/// Inverse of teich_digits at the given precision.
inline PadicInt teich_assemble(std::uint32_t p, const std::vector<std::uint32_t>& digits,
                               std::uint32_t precision) {
    PadicInt acc(p, precision, 0);
    std::uint64_t scale = 1;
    for (std::size_t i = 0; i < digits.size() && i < precision; ++i) {
        const std::uint64_t w = teichmuller(digits[i], p, precision).value();
        acc = padic_add(acc, PadicInt(p, precision, detail::mulmod(w, scale, acc.modulus())));
        scale = detail::mulmod(scale, p, acc.modulus());
    }
    return acc;
}

} // namespace lcf
