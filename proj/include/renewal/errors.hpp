#pragma once

#include <stdexcept>
#include <string>

namespace renewal {

// Bad scenario input: unparseable file, unknown key, invalid field value.
// Messages carry the offending field path where one exists.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Any runtime failure of the numerical machinery.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

// A state left the admissible region (non-positive gauge argument,
// Lyapunov evaluation on a boundary or non-warm state).
class DomainError : public NumericalError {
public:
    explicit DomainError(const std::string& msg) : NumericalError(msg) {}
};

// The implicit endpoint weight of the renewal solve reached 1; the
// step size must be reduced.
class StepSizeError : public NumericalError {
public:
    explicit StepSizeError(const std::string& msg) : NumericalError(msg) {}
};

// Root bracketing/bisection failure on pathological inputs.
class SolverError : public NumericalError {
public:
    explicit SolverError(const std::string& msg) : NumericalError(msg) {}
};

// An internal identity that must hold at a computed solution did not.
class ConsistencyError : public NumericalError {
public:
    explicit ConsistencyError(const std::string& msg) : NumericalError(msg) {}
};

} // namespace renewal
