#pragma once

#include <stdexcept>
#include <string>

namespace ptl {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument violates an operation's precondition (n = 0, hi < lo, a >= q, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// A configured compute or memory budget would be exceeded.
class ResourceError : public Error {
public:
    using Error::Error;
};

/// An exact integer result does not fit its representation.
class OverflowError : public Error {
public:
    using Error::Error;
};

/// Adaptive quadrature failed to reach the requested tolerance.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

}  // namespace ptl
