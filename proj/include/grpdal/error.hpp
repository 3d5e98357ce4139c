#pragma once

#include <stdexcept>
#include <string>

namespace grpdal {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// bad sizes, out-of-range parameters
struct InvalidArgument : Error {
    using Error::Error;
};

// an operation was called in a state it does not support (missing reference
// point, empty accumulator, wrong algorithm for the problem at hand)
struct PreconditionViolation : Error {
    using Error::Error;
};

// a function value is +inf where a finite one was required
struct DomainViolation : Error {
    using Error::Error;
};

// descriptor has no closed-form prox / conjugate for the requested path
struct UnsupportedFunction : Error {
    using Error::Error;
};

// inner solver exhausted its iteration cap; carries the best gap seen
struct InexactSolveFailed : Error {
    double best_gap;
    InexactSolveFailed(const std::string& msg, double gap)
        : Error(msg), best_gap(gap) {}
};

// theory violation: indicates a bug or a wrong operator-norm estimate
struct InternalError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

}  // namespace grpdal
