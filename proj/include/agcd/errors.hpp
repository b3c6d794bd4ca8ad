#pragma once
// Exception taxonomy shared across the library.

#include <stdexcept>
#include <string>

namespace agcd {

// Incompatible matrix or polynomial shapes.
struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Invalid caller-supplied parameter (window size, degree, tolerance, ...).
struct ParameterError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Non-finite input, or an internal numerical condition that should be impossible.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Input claimed to be structured lies too far from the structure set.
struct StructureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An iteration ended without reaching its stopping criterion.
struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A rank decision fell inside the ambiguity band around the pivot threshold.
struct RankToleranceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Leading coefficient singular or too ill-conditioned to invert.
class NormalizationError : public std::runtime_error {
public:
    NormalizationError(const std::string& what, double smallest_singular_value)
        : std::runtime_error(what), smallest_singular_value_(smallest_singular_value) {}

    double smallest_singular_value() const noexcept { return smallest_singular_value_; }

private:
    double smallest_singular_value_;
};

}  // namespace agcd
