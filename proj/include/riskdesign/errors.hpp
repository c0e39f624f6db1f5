#pragma once

#include <stdexcept>
#include <string>

namespace riskdesign {

/// Participation cannot be satisfied; carries the smallest perceived cost
/// that any admissible contract/action pair can achieve.
class InfeasibleError : public std::runtime_error {
public:
    InfeasibleError(const std::string& message, double min_achievable)
        : std::runtime_error(message), min_achievable_(min_achievable) {}

    double min_achievable() const { return min_achievable_; }

private:
    double min_achievable_;
};

/// Requested operation is not defined for the given model configuration
/// (e.g. derivatives of an isolated discrete action family).
class UnsupportedError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// A numerical procedure failed to converge or collapsed (step underflow,
/// degenerate Jacobian, ...).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace riskdesign
