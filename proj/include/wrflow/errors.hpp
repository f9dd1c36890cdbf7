#ifndef WRFLOW_ERRORS_HPP
#define WRFLOW_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace wrflow {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error {
    using Error::Error;
};

// Input matrix has an eigenvalue below the clip window.
struct NotPsd : Error {
    using Error::Error;
};

struct OrderViolation : Error {
    using Error::Error;
};

// Schur and intrinsic shorted operators disagree beyond tolerance.
struct MethodDisagreement : Error {
    using Error::Error;
};

struct NotInK : Error {
    using Error::Error;
};

struct LedgerMissing : Error {
    using Error::Error;
};

struct ParseError : Error {
    using Error::Error;
};

struct ValidationError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

struct InvariantViolation : Error {
    using Error::Error;
};

} // namespace wrflow

#endif
