#pragma once

#include <cstdint>
#include <string>

#include "errors.hpp"

namespace lcf {

inline bool is_prime(std::uint32_t n) {
    if (n < 2) return false;
    for (std::uint32_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

/// Characteristic pair (q, p) of a field and its residue field. Exactly two
/// shapes exist: equal characteristic (q = p, with p zero or prime) and mixed
/// characteristic (q = 0 < p, with p prime). In mixed characteristic the
/// uniformizer tau is identified with the prime p itself.
class CharMode {
public:
    static CharMode equal(std::uint32_t p) {
        if (p != 0 && !is_prime(p))
            throw DomainError("equal characteristic requires p = 0 or prime, got " + std::to_string(p));
        return CharMode(false, p);
    }
    static CharMode mixed(std::uint32_t p) {
        if (!is_prime(p))
            throw DomainError("mixed characteristic requires a prime, got " + std::to_string(p));
        return CharMode(true, p);
    }

    bool is_mixed() const { return mixed_; }
    /// Characteristic p of the residue field.
    std::uint32_t residue_char() const { return p_; }
    /// Characteristic q of the field itself.
    std::uint32_t field_char() const { return mixed_ ? 0 : p_; }

    friend bool operator==(const CharMode& a, const CharMode& b) {
        return a.mixed_ == b.mixed_ && a.p_ == b.p_;
    }

    std::string str() const {
        return (mixed_ ? std::string("mixed p=") : std::string("equal p=")) + std::to_string(p_);
    }

private:
    CharMode(bool mixed, std::uint32_t p) : mixed_(mixed), p_(p) {}

    bool mixed_;
    std::uint32_t p_;
};

} // namespace lcf
