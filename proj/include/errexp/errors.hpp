#pragma once
#include <stdexcept>
#include <string>

namespace errexp {

// Invalid arguments / parameter domains.
struct DomainError : std::invalid_argument {
    explicit DomainError(const std::string& m) : std::invalid_argument(m) {}
};

// Exhaustive-evaluation size bounds exceeded.
struct ResourceError : std::runtime_error {
    explicit ResourceError(const std::string& m) : std::runtime_error(m) {}
};

// Iterative solver failed to converge; message carries the last bracket/trace.
struct ConvergenceError : std::runtime_error {
    explicit ConvergenceError(const std::string& m) : std::runtime_error(m) {}
};

// Non-finite intermediate values.
struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& m) : std::runtime_error(m) {}
};

}  // namespace errexp
