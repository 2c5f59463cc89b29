#pragma once

#include <stdexcept>
#include <string>

namespace nlcavity {

/// Base of every error raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

/// Iterative method ran out of budget. Carries the last estimate.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double best_estimate)
        : Error(what), best_estimate_(best_estimate) {}
    [[nodiscard]] double best_estimate() const noexcept { return best_estimate_; }

private:
    double best_estimate_;
};

class StiffnessError : public ConvergenceError {
public:
    StiffnessError(const std::string& what, double t_reached)
        : ConvergenceError(what, t_reached) {}
};

class BracketError : public Error {
public:
    using Error::Error;
};

class FitDegenerateError : public Error {
public:
    using Error::Error;
};

class TruncationError : public Error {
public:
    TruncationError(const std::string& what, int required_dim)
        : Error(what), required_dim_(required_dim) {}
    [[nodiscard]] int required_dim() const noexcept { return required_dim_; }

private:
    int required_dim_;
};

/// A physical model was applied outside its regime.
class ValidityError : public Error {
public:
    using Error::Error;
};

class InstabilityError : public ValidityError {
public:
    using ValidityError::ValidityError;
};

class NonLorentzianError : public ValidityError {
public:
    using ValidityError::ValidityError;
};

class NoHorizonError : public ValidityError {
public:
    using ValidityError::ValidityError;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace nlcavity
