#pragma once

#include <stdexcept>
#include <string>

namespace ncorlicz {

// Construction-time parameter violations (bad family parameters, bad
// partitions, malformed specs). Never raised during evaluation.
struct InvalidParameter : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Operator/algebra shape mismatches.
struct DimensionMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// The index-characterization integral does not converge for the requested
// exponent (p >= p_phi or q <= q_phi).
struct DivergentIntegral : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Growth indices of the Orlicz function fall outside the regime a verifier
// or the interpolation machinery requires.
struct RegimeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// CLI / config file problems.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

}  // namespace ncorlicz
