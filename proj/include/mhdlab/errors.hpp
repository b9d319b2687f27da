#pragma once

#include <stdexcept>
#include <string>

namespace mhdlab {

struct GridMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Raised by lambda_pow / homogeneous_norm when s < 0 and the zero mode carries mass.
struct NegativeOrderOnZeroMode : std::domain_error {
    NegativeOrderOnZeroMode()
        : std::domain_error("negative-order multiplier applied to a field with a nonzero mean") {}
};

// Raised when the bracket of the closed-form comparison bound is non-positive.
struct BeyondComparisonHorizon : std::domain_error {
    explicit BeyondComparisonHorizon(double t)
        : std::domain_error("comparison bound undefined at t=" + std::to_string(t)), time(t) {}
    double time;
};

struct BlowUpDetected : std::runtime_error {
    BlowUpDetected(double t, const std::string& what_norm)
        : std::runtime_error("blow-up candidate at t=" + std::to_string(t) + " (" + what_norm + ")"),
          time(t) {}
    double time;
};

struct QuadratureFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace mhdlab
