#pragma once

#include <stdexcept>
#include <string>

namespace lcf {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Operation outside the mathematical domain (bad operands, mismatched modes, overflow).
class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error(what) {}
};

/// Arithmetic on opaque generator symbols beyond the supported restricted set.
class UnsupportedSymbolic : public Error {
public:
    explicit UnsupportedSymbolic(const std::string& what) : Error(what) {}
};

/// The requested result is not determined by the known digits/terms of the operands.
class PrecisionLoss : public Error {
public:
    explicit PrecisionLoss(const std::string& what) : Error(what) {}
};

class DivisionByZero : public Error {
public:
    explicit DivisionByZero(const std::string& what) : Error(what) {}
};

/// Distance matrix is not a valid ultrametric input (asymmetry, bad diagonal, ...).
class MalformedMatrix : public Error {
public:
    explicit MalformedMatrix(const std::string& what) : Error(what) {}
};

/// Internal consistency check of the embedding engine failed. Indicates a bug; never swallowed.
class IsometryFailure : public Error {
public:
    explicit IsometryFailure(const std::string& what) : Error(what) {}
};

class NonIntegralExponent : public Error {
public:
    explicit NonIntegralExponent(const std::string& what) : Error(what) {}
};

/// A streaming extension step would need the unattained-infimum (limit) construction,
/// which requires spherical completeness and is deliberately not implemented.
class LimitCaseRequired : public Error {
public:
    explicit LimitCaseRequired(const std::string& what) : Error(what) {}
};

/// Prefix points handed to an extension do not realize the required distances.
class InconsistentPrefix : public Error {
public:
    explicit InconsistentPrefix(const std::string& what) : Error(what) {}
};

/// A coefficient has no slot in the declared marker alphabet.
class AlphabetOverflow : public Error {
public:
    explicit AlphabetOverflow(const std::string& what) : Error(what) {}
};

/// Input JSON does not match the expected schema; carries a JSON-pointer-style path.
class SchemaError : public Error {
public:
    SchemaError(const std::string& pointer, const std::string& what)
        : Error(pointer + ": " + what), pointer_(pointer) {}
    const std::string& pointer() const { return pointer_; }

private:
    std::string pointer_;
};

} // namespace lcf
