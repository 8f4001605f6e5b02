#ifndef STATBUNDLE_ERRORS_HPP
#define STATBUNDLE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace statbundle {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Two values live on different sample spaces.
struct SpaceMismatch : Error {
    using Error::Error;
};

// A fiber vector was used at a base point other than its own.
struct BaseMismatch : Error {
    using Error::Error;
};

// A weight or a 1+w factor is not strictly positive.
struct NonPositive : Error {
    using Error::Error;
};

// An integrator state left the open simplex.
struct PositivityBreach : Error {
    using Error::Error;
};

// Sinkhorn/IPF sweep limit reached before the margin tolerance.
struct ConvergenceFailure : Error {
    using Error::Error;
};

// A Gram or normal system is numerically singular (condition > 1e12).
struct IllConditioned : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

}  // namespace statbundle

#endif
