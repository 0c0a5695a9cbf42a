#pragma once

#include <stdexcept>
#include <string>

namespace relphase {

/// A StateSpec names a family with parameters the family cannot take.
class InvalidSpecError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The requested state carries no phase information (e.g. zero photons).
class DegenerateStateError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Fixed-photon-number projection left (numerically) nothing behind.
class EmptyComponentError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The integrand returned NaN or Inf.
class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, double node)
        : std::runtime_error(what), node_(node) {}

    double node() const noexcept { return node_; }

private:
    double node_;
};

/// Adaptive integration hit its depth or evaluation cap before the tolerance.
class NonConvergenceError : public std::runtime_error {
public:
    NonConvergenceError(const std::string& what, double lower, double upper, double error)
        : std::runtime_error(what), lower_(lower), upper_(upper), error_(error) {}

    double worst_lower() const noexcept { return lower_; }
    double worst_upper() const noexcept { return upper_; }
    double worst_error() const noexcept { return error_; }

private:
    double lower_;
    double upper_;
    double error_;
};

}  // namespace relphase
