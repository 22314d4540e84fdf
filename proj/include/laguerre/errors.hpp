#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace laguerre {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition on an input parameter was violated.
class InvalidParameter : public Error {
public:
    using Error::Error;
};

/// Input data (a density sample, a function value) is malformed.
class InvalidInput : public Error {
public:
    using Error::Error;
};

/// An iterative numerical method did not converge or broke down.
class NumericalFailure : public Error {
public:
    using Error::Error;
};

/// Evaluation at a point where the function has a singularity.
class DomainSingularity : public Error {
public:
    using Error::Error;
};

/// Exact integer arithmetic would overflow.
class OverflowGuard : public Error {
public:
    using Error::Error;
};

/// A Monte Carlo replicate failed; carries the index of the first failing replicate.
class ReplicateFailure : public Error {
public:
    ReplicateFailure(std::size_t index, const std::string& what)
        : Error("replicate " + std::to_string(index) + " failed: " + what), index_(index) {}

    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

}  // namespace laguerre
