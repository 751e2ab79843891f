// errors.hpp — exception types shared across the library.
#pragma once

#include <stdexcept>

namespace dicke {

// Malformed or contradictory run configuration. The CLI maps this to exit 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A solver failed to converge or produced an unusable state. Exit 3.
struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace dicke
