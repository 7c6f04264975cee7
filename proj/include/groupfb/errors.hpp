#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace groupfb {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Structural problem: malformed input, inconsistent dimensions, broken
/// group axioms. Maps to CLI exit code 2.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Mathematical rejection: the requested construction exists only under a
/// rank/frame condition that the input fails. Maps to CLI exit code 3.
class RejectionError : public Error {
public:
    using Error::Error;
};

/// A_H fell below tolerance; carries the worst character and its smallest
/// eigenvalue of H*(gamma)H(gamma).
class SingularFieldError : public RejectionError {
public:
    SingularFieldError(const std::string& what, std::size_t gamma, double lambda_min)
        : RejectionError(what), gamma_index(gamma), lambda_min(lambda_min) {}

    std::size_t gamma_index;
    double lambda_min;
};

} // namespace groupfb
