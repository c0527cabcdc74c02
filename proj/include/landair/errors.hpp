#pragma once

#include <stdexcept>
#include <string>

namespace landair {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input is well-formed but infeasible for the model: a battery too heavy to
/// lift, a thrust outside the tabulated range, a goal no path reaches.
/// The CLI maps these to exit code 1.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Requested hover thrust exceeds what the powertrain can produce.
class NoFlyError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Malformed input file or unusable arguments. The CLI maps these to exit 2.
class ParseError : public Error {
public:
    using Error::Error;
};

}  // namespace landair
