#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ecca {

// Base class for everything this library throws.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Shape mismatches and malformed inputs (bad CSV, sample-count mismatch, ...).
struct DimensionError : Error {
    using Error::Error;
};

// Out-of-range or inconsistent parameter values.
struct ValueError : Error {
    using Error::Error;
};

// Numerical failures: factorization breakdown, eigensolver non-convergence.
struct NumericError : Error {
    using Error::Error;
};

struct NotPositiveDefiniteError : NumericError {
    NotPositiveDefiniteError(const std::string& what, std::size_t pivot_index)
        : NumericError(what), index(pivot_index) {}
    std::size_t index;
};

}  // namespace ecca
