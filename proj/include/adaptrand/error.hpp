#pragma once

#include <stdexcept>
#include <string>

namespace adaptrand {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// A configuration or argument violates a documented invariant.
class ValidationError : public Error {
   public:
    using Error::Error;
};

/// An argument lies outside the mathematical domain of a function.
class DomainError : public Error {
   public:
    using Error::Error;
};

/// A per-arm quantity was requested for an arm with no subjects.
class EmptyArmError : public Error {
   public:
    using Error::Error;
};

/// A statistic is undefined for the supplied sizes.
class DegenerateError : public Error {
   public:
    using Error::Error;
};

/// An iterative numerical routine failed to reach its tolerance.
class ConvergenceError : public Error {
   public:
    using Error::Error;
};

}  // namespace adaptrand
