#pragma once

#include <stdexcept>

namespace sigstream {

/// Malformed path, stream, matrix or argument.
struct InvalidInput : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct IncompatibleSignatures : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct InvalidAxes : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Inconsistent experiment configuration (fold counts, group sizes, ...).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace sigstream
