#pragma once

#include <stdexcept>
#include <string>

namespace nullwave {

/// Caller passed arguments that violate an operation's preconditions
/// (dimension mismatch, index out of range, malformed config).
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Input data is structurally wrong (e.g. a weight matrix that is not symmetric).
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An ODE integration produced a non-finite state.
class DivergenceError : public std::runtime_error {
public:
    DivergenceError(const std::string& what, double last_valid_t)
        : std::runtime_error(what), last_valid_t_(last_valid_t) {}

    double last_valid_t() const noexcept { return last_valid_t_; }

private:
    double last_valid_t_;
};

/// The wave solver detected blow-up: a non-finite value or max|u_t| beyond
/// the configured multiple of its initial value.
class BlowUpError : public std::runtime_error {
public:
    BlowUpError(const std::string& what, double t, double max_ut)
        : std::runtime_error(what), t_(t), max_ut_(max_ut) {}

    double time() const noexcept { return t_; }
    double max_ut() const noexcept { return max_ut_; }

private:
    double t_;
    double max_ut_;
};

/// Iteration refused to start or failed numerically (e.g. contraction gate K >= 1).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace nullwave
