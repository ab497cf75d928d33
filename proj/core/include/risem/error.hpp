#pragma once

#include <stdexcept>
#include <string>

namespace risem {

/// Malformed or inconsistent configuration. Maps to CLI exit code 2.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Numerical failure: factorization, degenerate samples, EM collapse.
/// Maps to CLI exit code 3.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace risem
