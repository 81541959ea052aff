#pragma once

#include <stdexcept>
#include <string>

namespace circtherm {

/// Base of every error raised by the library. `operation()` names the entry
/// point that failed so front ends can report it.
class Error : public std::runtime_error {
public:
    Error(std::string operation, const std::string& what)
        : std::runtime_error(operation + ": " + what), operation_(std::move(operation)) {}

    const std::string& operation() const noexcept { return operation_; }

private:
    std::string operation_;
};

// Numerical failures.
class SolverFailure : public Error { using Error::Error; };
class InvalidMap : public Error { using Error::Error; };
class DimensionError : public Error { using Error::Error; };
class ComplexLeadingEigenvalue : public Error { using Error::Error; };
class BudgetError : public Error { using Error::Error; };
class NoSignStructure : public Error { using Error::Error; };
class NumericalError : public Error { using Error::Error; };

// Bad arguments (slopes, periods, parameters outside their domain).
class DomainError : public Error { using Error::Error; };

// Configuration documents: malformed text or a field failing validation.
class ConfigError : public Error { using Error::Error; };

}  // namespace circtherm
