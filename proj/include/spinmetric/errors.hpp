#pragma once

#include <stdexcept>
#include <string>

namespace spinmetric {

/// Fock cutoff outside the allowed range.
class InvalidCutoff : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Operator or state dimensions do not fit the target space.
class ShapeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Parameter outside the mathematical domain of an operation (mu <= 0, G < 0, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A numerical invariant (Hermiticity, norm, energy, eigensolver convergence) was violated.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Finite-difference extraction around a Dirac point is not meaningful for these couplings.
class ExtractionInvalid : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A time series is too short for the requested diagnostic.
class InsufficientData : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad configuration key or value; `key()` names the offending entry.
class ConfigError : public std::invalid_argument {
public:
    ConfigError(std::string key, const std::string& what)
        : std::invalid_argument(what), key_(std::move(key)) {}

    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

}  // namespace spinmetric
