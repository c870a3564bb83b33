#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "charmode.hpp"
#include "errors.hpp"
#include "rational.hpp"

namespace lcf {

/// Element of a working coefficient domain. One of:
///  - PrimeField: residue r mod p. In mixed characteristic a stored residue d
///    stands for its Teichmuller representative, an element of the fixed
///    system J of the ring of Witt vectors.
///  - Rational: exact rational (equal characteristic zero).
///  - PadicWord: integer known to N base-p digits; raw material for
///    normalization, never stored inside a normalized series.
///  - Generator: opaque transcendence marker b_alpha. Arithmetic on
///    generators is restricted to equality, cancellation against the same
///    index, and scaling by 0 or 1; everything else raises
///    UnsupportedSymbolic. The embedding engine and its verifiers only ever
///    need first-difference detection, so nothing more is modeled.
class Coefficient {
public:
    enum class Kind { PrimeField, Rational, PadicWord, Generator };

    static Coefficient prime_field(std::uint32_t p, std::uint64_t r) {
        if (!is_prime(p)) throw DomainError("prime field modulus must be prime");
        return Coefficient(PF{p, static_cast<std::uint32_t>(r % p)});
    }
    static Coefficient rational(Rational v) { return Coefficient(std::move(v)); }
    static Coefficient padic_word(std::uint32_t p, std::vector<std::uint32_t> digits) {
        if (!is_prime(p)) throw DomainError("p-adic word modulus must be prime");
        if (digits.empty()) throw DomainError("p-adic word needs at least one digit");
        for (auto d : digits)
            if (d >= p) throw DomainError("p-adic word digit out of range");
        return Coefficient(PW{p, std::move(digits)});
    }
    static Coefficient generator(std::uint32_t index) { return Coefficient(Gen{index}); }

    Kind kind() const { return static_cast<Kind>(v_.index()); }

    bool is_zero() const {
        switch (kind()) {
        case Kind::PrimeField: return std::get<PF>(v_).r == 0;
        case Kind::Rational: return std::get<Rational>(v_).is_zero();
        case Kind::PadicWord: {
            for (auto d : std::get<PW>(v_).digits)
                if (d != 0) return false;
            return true;
        }
        case Kind::Generator: return false;
        }
        return false;
    }

    std::uint32_t pf_p() const { return std::get<PF>(v_).p; }
    std::uint32_t pf_residue() const { return std::get<PF>(v_).r; }
    const Rational& rat() const { return std::get<Rational>(v_); }
    std::uint32_t pw_p() const { return std::get<PW>(v_).p; }
    const std::vector<std::uint32_t>& pw_digits() const { return std::get<PW>(v_).digits; }
    std::uint32_t gen_index() const { return std::get<Gen>(v_).index; }

    std::string str() const {
        switch (kind()) {
        case Kind::PrimeField: return std::to_string(pf_residue());
        case Kind::Rational: return rat().str();
        case Kind::PadicWord: {
            std::string s = "[";
            const auto& ds = pw_digits();
            for (std::size_t i = 0; i < ds.size(); ++i)
                s += (i ? "," : "") + std::to_string(ds[i]);
            return s + "]";
        }
        case Kind::Generator: return "b_" + std::to_string(gen_index());
        }
        return "?";
    }

    friend bool operator==(const Coefficient& a, const Coefficient& b) { return coeff_eq(a, b); }

    /// Structural equality within a domain; the distinct zeros of all domains
    /// are identified so that equality is an equivalence relation on values.
    friend bool coeff_eq(const Coefficient& a, const Coefficient& b) {
        if (a.is_zero() && b.is_zero()) return true;
        if (a.kind() != b.kind()) return false;
        switch (a.kind()) {
        case Kind::PrimeField:
            return a.pf_p() == b.pf_p() && a.pf_residue() == b.pf_residue();
        case Kind::Rational: return a.rat() == b.rat();
        case Kind::PadicWord:
            return a.pw_p() == b.pw_p() && a.pw_digits() == b.pw_digits();
        case Kind::Generator: return a.gen_index() == b.gen_index();
        }
        return false;
    }

private:
    struct PF {
        std::uint32_t p;
        std::uint32_t r;
    };
    struct PW {
        std::uint32_t p;
        std::vector<std::uint32_t> digits;
    };
    struct Gen {
        std::uint32_t index;
    };

    explicit Coefficient(PF v) : v_(v) {}
    explicit Coefficient(Rational v) : v_(std::move(v)) {}
    explicit Coefficient(PW v) : v_(std::move(v)) {}
    explicit Coefficient(Gen v) : v_(v) {}

    std::variant<PF, Rational, PW, Gen> v_;
};

/// The canonical zero returned by symbolic cancellation; kind-independent via
/// is_zero / coeff_eq.
inline Coefficient coeff_zero() { return Coefficient::rational(Rational(0)); }

/// Zero and unit of the residue domain selected by a mode.
inline Coefficient domain_zero(const CharMode& mode) {
    return mode.residue_char() == 0 ? Coefficient::rational(Rational(0))
                                    : Coefficient::prime_field(mode.residue_char(), 0);
}
inline Coefficient domain_one(const CharMode& mode) {
    return mode.residue_char() == 0 ? Coefficient::rational(Rational(1))
                                    : Coefficient::prime_field(mode.residue_char(), 1);
}

namespace detail {

inline std::uint32_t require_same_p(const Coefficient& a, const Coefficient& b) {
    const std::uint32_t pa = a.kind() == Coefficient::Kind::PrimeField ? a.pf_p() : a.pw_p();
    const std::uint32_t pb = b.kind() == Coefficient::Kind::PrimeField ? b.pf_p() : b.pw_p();
    if (pa != pb) throw DomainError("coefficients from different prime domains");
    return pa;
}

enum class CoeffOp { Add, Sub, Mul };

inline Coefficient pw_combine(const Coefficient& a, const Coefficient& b, CoeffOp op) {
    const std::uint32_t p = require_same_p(a, b);
    const std::size_t n = std::min(a.pw_digits().size(), b.pw_digits().size());
    std::vector<std::uint32_t> out(n, 0);
    if (op == CoeffOp::Mul) {
        // schoolbook product, truncated to the common precision
        for (std::size_t i = 0; i < n; ++i) {
            std::uint64_t carry = 0;
            for (std::size_t j = 0; i + j < n; ++j) {
                std::uint64_t cur = out[i + j] +
                                    std::uint64_t(a.pw_digits()[i]) * b.pw_digits()[j] + carry;
                out[i + j] = static_cast<std::uint32_t>(cur % p);
                carry = cur / p;
            }
        }
    } else {
        std::int64_t carry = 0;
        for (std::size_t i = 0; i < n; ++i) {
            std::int64_t cur = carry + std::int64_t(a.pw_digits()[i]) +
                               (op == CoeffOp::Add ? std::int64_t(b.pw_digits()[i])
                                                   : -std::int64_t(b.pw_digits()[i]));
            carry = 0;
            while (cur < 0) {
                cur += p;
                --carry;
            }
            out[i] = static_cast<std::uint32_t>(cur % p);
            carry += cur / p;
        }
    }
    return Coefficient::padic_word(p, std::move(out));
}

inline Coefficient combine(const Coefficient& a, const Coefficient& b, CoeffOp op) {
    using K = Coefficient::Kind;

    if (a.kind() == K::Generator || b.kind() == K::Generator) {
        if (a.kind() == K::Generator && b.kind() == K::Generator) {
            if (op == CoeffOp::Sub && a.gen_index() == b.gen_index()) return coeff_zero();
            throw UnsupportedSymbolic("generator-generator " +
                                      std::string(op == CoeffOp::Add   ? "addition"
                                                  : op == CoeffOp::Sub ? "subtraction"
                                                                       : "product") +
                                      " is outside the restricted symbolic arithmetic");
        }
        const Coefficient& scalar = a.kind() == K::Generator ? b : a;
        const Coefficient& gen = a.kind() == K::Generator ? a : b;
        if (op == CoeffOp::Mul) {
            if (scalar.is_zero()) return coeff_zero();
            const bool is_one =
                (scalar.kind() == K::PrimeField && scalar.pf_residue() == 1) ||
                (scalar.kind() == K::Rational && scalar.rat() == Rational(1));
            if (is_one) return gen;
            throw UnsupportedSymbolic("generator scaling is limited to 0 and 1");
        }
        if (scalar.is_zero()) {
            if (op == CoeffOp::Add || &gen == &a) return gen; // gen +- 0, 0 + gen
            throw UnsupportedSymbolic("negation of a generator symbol");
        }
        throw UnsupportedSymbolic("generator combined with a non-zero base element");
    }

    if (a.kind() == K::PrimeField && b.kind() == K::PrimeField) {
        const std::uint32_t p = require_same_p(a, b);
        const std::uint64_t x = a.pf_residue(), y = b.pf_residue();
        std::uint64_t r = 0;
        switch (op) {
        case CoeffOp::Add: r = (x + y) % p; break;
        case CoeffOp::Sub: r = (x + p - y) % p; break;
        case CoeffOp::Mul: r = (x * y) % p; break;
        }
        return Coefficient::prime_field(p, r);
    }
    if (a.kind() == K::Rational && b.kind() == K::Rational) {
        switch (op) {
        case CoeffOp::Add: return Coefficient::rational(a.rat() + b.rat());
        case CoeffOp::Sub: return Coefficient::rational(a.rat() - b.rat());
        case CoeffOp::Mul: return Coefficient::rational(a.rat() * b.rat());
        }
    }
    if (a.kind() == K::PadicWord && b.kind() == K::PadicWord) return pw_combine(a, b, op);
    throw DomainError("coefficients from different domains: " + a.str() + " vs " + b.str());
}

} // namespace detail

inline Coefficient coeff_add(const Coefficient& a, const Coefficient& b) {
    return detail::combine(a, b, detail::CoeffOp::Add);
}
inline Coefficient coeff_sub(const Coefficient& a, const Coefficient& b) {
    return detail::combine(a, b, detail::CoeffOp::Sub);
}
inline Coefficient coeff_mul(const Coefficient& a, const Coefficient& b) {
    return detail::combine(a, b, detail::CoeffOp::Mul);
}

/// Does the coefficient belong to the residue domain of the mode?
/// Mixed characteristic stores digits (prime-field residues standing for
/// their Teichmuller lifts) or generator symbols.
inline bool coefficient_fits(const CharMode& mode, const Coefficient& c) {
    using K = Coefficient::Kind;
    if (c.kind() == K::Generator) return true;
    if (mode.residue_char() == 0) return c.kind() == K::Rational;
    return c.kind() == K::PrimeField && c.pf_p() == mode.residue_char();
}

} // namespace lcf
