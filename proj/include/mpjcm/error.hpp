#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace mpjcm {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid user input: bad parameters, unknown names, malformed config.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A state that cannot be formed (e.g. the odd cat of the vacuum).
class InvalidStateError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

/// Input does not belong to the class an operation is defined for.
class InputClassError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

/// A numerical budget was exceeded: truncation tail, norm drift, overflow.
class NumericBudgetError : public Error {
public:
    using Error::Error;
};

class TruncationError : public NumericBudgetError {
public:
    using NumericBudgetError::NumericBudgetError;
};

class OverflowError : public NumericBudgetError {
public:
    using NumericBudgetError::NumericBudgetError;
};

/// Quantity undefined for the given input (division by a vanishing photon number).
class DomainError : public Error {
public:
    using Error::Error;
};

namespace detail {

// Three significant digits for diagnostics.
inline std::string brief(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

}  // namespace detail

}  // namespace mpjcm
