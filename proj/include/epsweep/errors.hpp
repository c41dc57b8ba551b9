#pragma once

#include <stdexcept>
#include <string>

namespace epsweep {

/// Base of every library error. `numerical()` separates solver trouble
/// (CLI exit code 2) from bad input (exit code 1).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual bool numerical() const noexcept { return false; }
};

class NumericalError : public Error {
public:
    using Error::Error;
    bool numerical() const noexcept override { return true; }
};

class ConvergenceFailure : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class NonFinite : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// vᵀv vanishes: the vector sits on (or numerically at) an exceptional point.
class SelfOrthogonal : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class ZeroVector : public Error {
public:
    using Error::Error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class ShapeMismatch : public Error {
public:
    using Error::Error;
};

class NotApplicable : public Error {
public:
    using Error::Error;
};

class UnknownScenario : public Error {
public:
    using Error::Error;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

/// A solver failure at a specific parameter value.
class SweepError : public NumericalError {
public:
    SweepError(double a, const std::string& what)
        : NumericalError("at a = " + std::to_string(a) + ": " + what), a_(a) {}
    double a() const noexcept { return a_; }

private:
    double a_;
};

} // namespace epsweep
