#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <utility>

#include <boost/multiprecision/cpp_int.hpp>

#include "errors.hpp"

namespace lcf {

/// Exact rational number in reduced canonical form (den > 0, gcd(num, den) = 1,
/// zero is 0/1). Equality is structural. Backed by arbitrary-precision
/// integers: coefficient arithmetic (geometric series, convolutions) grows
/// numerators without bound and must never wrap.
class Rational {
public:
    using Int = boost::multiprecision::cpp_int;

    Rational() : num_(0), den_(1) {}
    Rational(std::int64_t n) : num_(n), den_(1) {} // NOLINT: implicit by design
    Rational(Int n) : num_(std::move(n)), den_(1) {} // NOLINT
    Rational(Int n, Int d) {
        if (d == 0) throw DivisionByZero("rational with zero denominator");
        reduce_from(std::move(n), std::move(d));
    }
    Rational(std::int64_t n, std::int64_t d) : Rational(Int(n), Int(d)) {}

    const Int& num_big() const { return num_; }
    const Int& den_big() const { return den_; }

    /// Numerator / denominator as machine integers; throws when they do not
    /// fit (callers use this only where smallness is a contract).
    std::int64_t num() const { return to_i64(num_, "numerator"); }
    std::int64_t den() const { return to_i64(den_, "denominator"); }

    bool is_zero() const { return num_ == 0; }
    bool is_integer() const { return den_ == 1; }

    /// Integer value reduced into [0, m) (requires den == 1).
    std::uint64_t integer_mod(std::uint64_t m) const {
        if (den_ != 1) throw DomainError("integer_mod on a non-integer rational");
        Int r = num_ % Int(m);
        if (r < 0) r += Int(m);
        return r.convert_to<std::uint64_t>();
    }
    std::uint64_t num_mod(std::uint64_t m) const {
        Int r = num_ % Int(m);
        if (r < 0) r += Int(m);
        return r.convert_to<std::uint64_t>();
    }
    std::uint64_t den_mod(std::uint64_t m) const {
        return Int(den_ % Int(m)).convert_to<std::uint64_t>();
    }

    friend Rational operator+(const Rational& a, const Rational& b) {
        return Rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        return Rational(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return Rational(a.num_ * b.num_, a.den_ * b.den_);
    }
    Rational operator-() const {
        Rational r;
        r.num_ = -num_;
        r.den_ = den_;
        return r;
    }
    Rational reciprocal() const {
        if (num_ == 0) throw DivisionByZero("reciprocal of zero");
        return Rational(den_, num_);
    }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        const Int lhs = a.num_ * b.den_;
        const Int rhs = b.num_ * a.den_;
        if (lhs < rhs) return std::strong_ordering::less;
        if (lhs > rhs) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

    /// Largest integer <= value.
    std::int64_t floor() const {
        Int q = num_ / den_;
        if (num_ % den_ != 0 && num_ < 0) --q;
        return to_i64(q, "floor");
    }
    /// Smallest integer >= value.
    std::int64_t ceil() const {
        Int q = num_ / den_;
        if (num_ % den_ != 0 && num_ > 0) ++q;
        return to_i64(q, "ceil");
    }

    /// Renders "n" for integers, "n/d" otherwise.
    std::string str() const {
        if (den_ == 1) return num_.str();
        return num_.str() + "/" + den_.str();
    }

    /// Parses "n" or "n/d". Whitespace is not accepted.
    static Rational parse(const std::string& s) {
        const auto slash = s.find('/');
        if (slash == std::string::npos) return Rational(parse_int(s), Int(1));
        return Rational(parse_int(s.substr(0, slash)), parse_int(s.substr(slash + 1)));
    }

private:
    void reduce_from(Int n, Int d) {
        if (d < 0) {
            n = -n;
            d = -d;
        }
        const Int g = boost::multiprecision::gcd(n, d);
        if (g > 1) {
            n /= g;
            d /= g;
        }
        if (n == 0) d = 1;
        num_ = std::move(n);
        den_ = std::move(d);
    }

    static Int parse_int(const std::string& s) {
        if (s.empty()) throw DomainError("empty integer literal");
        std::size_t i = s[0] == '-' || s[0] == '+' ? 1 : 0;
        if (i == s.size()) throw DomainError("unparsable integer: " + s);
        for (; i < s.size(); ++i)
            if (s[i] < '0' || s[i] > '9') throw DomainError("unparsable integer: " + s);
        return Int(s);
    }

    static std::int64_t to_i64(const Int& v, const char* what) {
        if (v < INT64_MIN || v > INT64_MAX)
            throw DomainError(std::string(what) + " does not fit in 64 bits");
        return v.convert_to<std::int64_t>();
    }

    Int num_;
    Int den_;
};

} // namespace lcf
