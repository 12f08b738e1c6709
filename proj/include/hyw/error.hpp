#pragma once

#include <stdexcept>
#include <string>

namespace hyw {

/// Malformed or out-of-contract input (shape mismatch, bad exponent, NaN entries).
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical routine did not converge; the message carries diagnostics.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid run configuration (CLI flags or config file).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace hyw
