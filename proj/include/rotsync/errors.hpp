#pragma once

#include <stdexcept>

namespace rotsync {

// Error taxonomy used across the library. The CLI maps these onto exit
// codes: configuration/usage -> 2, I/O -> 3, numerical failure -> 4.

struct ArgumentError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct StreamError : std::logic_error {
    using std::logic_error::logic_error;
};

struct SimulationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace rotsync
