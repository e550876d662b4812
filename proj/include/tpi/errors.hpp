#pragma once

#include <stdexcept>
#include <string>

namespace tpi {

/// Caller passed an argument outside an operation's documented domain.
struct invalid_parameter_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A build would exceed a configured memory or size budget.
struct resource_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A model invariant (unit norm, orthonormality, ...) failed at build time.
struct model_invariant_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Non-finite values appeared during an iterative computation.
struct numerical_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Direction vector is (numerically) parallel to the estimate, so the
/// projected variance term degenerates.
struct degenerate_direction_error : invalid_parameter_error {
    using invalid_parameter_error::invalid_parameter_error;
};

/// Operation is undefined for the requested tensor order (k = 2 in the
/// mixture-weight integrals).
struct unsupported_order_error : invalid_parameter_error {
    using invalid_parameter_error::invalid_parameter_error;
};

/// Bad experiment configuration (file syntax, unknown key, invalid value).
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// File could not be written or read.
struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace tpi
