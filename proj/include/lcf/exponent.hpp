#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "errors.hpp"
#include "rational.hpp"

namespace lcf {

/// Element of the value group G (an exact rational), or the distinguished
/// symbol INF (the valuation of zero). INF is absorbing under addition and
/// maximal under the ordering. Distances are carried as exponents g with
/// d = eta^{-g}; a larger exponent means a smaller distance.
class Exponent {
public:
    Exponent() : inf_(true) {}
    Exponent(Rational v) : inf_(false), val_(v) {} // NOLINT: implicit by design
    Exponent(std::int64_t v) : inf_(false), val_(v) {} // NOLINT

    static Exponent infinity() { return Exponent(); }

    bool is_inf() const { return inf_; }
    /// Finite value; throws on INF.
    const Rational& finite() const {
        if (inf_) throw DomainError("exponent is infinite");
        return val_;
    }

    friend Exponent operator+(const Exponent& a, const Exponent& b) {
        if (a.inf_ || b.inf_) return infinity();
        return Exponent(a.val_ + b.val_);
    }
    /// Subtraction requires a finite right operand.
    friend Exponent operator-(const Exponent& a, const Exponent& b) {
        if (b.inf_) throw DomainError("cannot subtract an infinite exponent");
        if (a.inf_) return infinity();
        return Exponent(a.val_ - b.val_);
    }

    friend bool operator==(const Exponent& a, const Exponent& b) {
        if (a.inf_ != b.inf_) return false;
        return a.inf_ || a.val_ == b.val_;
    }
    friend std::strong_ordering operator<=>(const Exponent& a, const Exponent& b) {
        if (a.inf_ && b.inf_) return std::strong_ordering::equal;
        if (a.inf_) return std::strong_ordering::greater;
        if (b.inf_) return std::strong_ordering::less;
        return a.val_ <=> b.val_;
    }

    std::string str() const { return inf_ ? "inf" : val_.str(); }

    /// Parses "inf" or a rational "n"/"n/d".
    static Exponent parse(const std::string& s) {
        if (s == "inf") return infinity();
        return Exponent(Rational::parse(s));
    }

private:
    bool inf_;
    Rational val_;
};

inline Exponent exp_min(const Exponent& a, const Exponent& b) { return a < b ? a : b; }
inline Exponent exp_max(const Exponent& a, const Exponent& b) { return a < b ? b : a; }

/// True iff the list is strictly increasing and purely finite. Finite exponent
/// sets are always tenuous in radius terms; the predicate validates
/// sortedness, duplicates, and the absence of INF (the zero radius is an
/// implicit member of every range set, never stored).
inline bool is_tenuous(const std::vector<Exponent>& s) {
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i].is_inf()) return false;
        if (i > 0 && !(s[i - 1] < s[i])) return false;
    }
    return true;
}

/// Finite tenuous exponent set: strictly increasing finite exponents,
/// standing for the radius set { eta^{-g} } plus the implicit zero.
class ExponentSet {
public:
    ExponentSet() = default;

    /// Sorts and validates; duplicates raise DomainError.
    explicit ExponentSet(std::vector<Rational> items) : items_(std::move(items)) {
        std::sort(items_.begin(), items_.end());
        for (std::size_t i = 1; i < items_.size(); ++i)
            if (items_[i - 1] == items_[i])
                throw DomainError("duplicate exponent in set: " + items_[i].str());
    }

    bool contains(const Rational& g) const {
        return std::binary_search(items_.begin(), items_.end(), g);
    }
    const std::vector<Rational>& items() const { return items_; }
    std::size_t size() const { return items_.size(); }

    ExponentSet intersect(const ExponentSet& other) const {
        std::vector<Rational> out;
        std::set_intersection(items_.begin(), items_.end(), other.items_.begin(),
                              other.items_.end(), std::back_inserter(out));
        return ExponentSet(std::move(out));
    }

private:
    std::vector<Rational> items_;
};

/// Number of integer steps i >= 0 with g + i < limit; the count of base-p
/// digit slots between an exponent and a truncation order.
inline std::int64_t digit_slots_below(const Rational& g, const Exponent& limit) {
    if (limit.is_inf()) throw DomainError("digit window against an infinite truncation");
    const Rational diff = limit.finite() - g;
    if (!(Rational(0) < diff)) return 0;
    return diff.is_integer() ? diff.num() : diff.ceil();
}

} // namespace lcf
