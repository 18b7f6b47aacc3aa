#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace polwire {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation (non-positive
/// lengths, permittivity below 1, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Invalid or inconsistent configuration. Carries every violation found, not
/// only the first one.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& message)
        : Error(message), violations_{message} {}
    explicit ConfigError(std::vector<std::string> violations);

    const std::vector<std::string>& violations() const noexcept { return violations_; }

private:
    std::vector<std::string> violations_;
};

/// Input failed a structural check (e.g. a matrix that should be Hermitian is not).
class IntegrityError : public Error {
public:
    using Error::Error;
};

/// Eigensolver failure, norm loss, or an aborted ensemble.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Requested problem exceeds the configured resource limits.
class ResourceError : public Error {
public:
    using Error::Error;
};

/// An observable is not defined for the given state (e.g. the wave packet
/// width when the molecular population vanishes).
class UndefinedObservableError : public Error {
public:
    using Error::Error;
};

} // namespace polwire
