#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace lcmle {

/// Base class for all errors raised by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The input data cannot support a fit (fewer than two distinct points,
/// no finite mass anchor, empty intersection with the support, ...).
struct DegenerateDataError : Error {
    using Error::Error;
};

/// An iterative solver ran out of iterations; carries the best iterate seen.
struct ConvergenceError : Error {
    ConvergenceError(const std::string& what, std::vector<double> best, int iterations)
        : Error(what), best_iterate(std::move(best)), iterations(iterations) {}

    std::vector<double> best_iterate;
    int iterations = 0;
};

/// A linear solve met a pivot too small to trust.
struct ConditioningError : Error {
    using Error::Error;
};

/// An internal invariant failed. Indicates a bug or numerically hostile input.
struct InternalError : Error {
    using Error::Error;
};

}  // namespace lcmle
