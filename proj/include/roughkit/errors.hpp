#pragma once

#include <stdexcept>
#include <string>

namespace roughkit {

// Base class for all library errors so callers can catch them in one clause.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Shape disagreement between operands (dimension d, target size m, ...).
class DimensionError : public Error {
public:
    using Error::Error;
};

// Tensor / rough-path truncation depth disagreement or overflow.
class DepthError : public Error {
public:
    using Error::Error;
};

// A time was requested that is not a grid point, or a grid lacks required points.
class GridError : public Error {
public:
    using Error::Error;
};

// Arguments violate the required ordering s <= u <= t.
class OrderError : public Error {
public:
    using Error::Error;
};

// Scalar parameter outside its admissible range.
class ParameterError : public Error {
public:
    using Error::Error;
};

// A partition does not cover the requested interval or leaves the grid.
class PartitionError : public Error {
public:
    using Error::Error;
};

// Grid resolution is insufficient for the requested construction.
class ResolutionError : public Error {
public:
    using Error::Error;
};

// Malformed file content (CSV / JSON).
class FormatError : public Error {
public:
    using Error::Error;
};

// An iteration failed to converge; carries solver diagnostics in the message.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

// An explicit scheme produced non-finite values; records the last valid time.
class BlowUpError : public Error {
public:
    BlowUpError(const std::string& what, double last_valid_time)
        : Error(what), last_valid_time_(last_valid_time) {}
    double last_valid_time() const { return last_valid_time_; }

private:
    double last_valid_time_;
};

// A numerical routine failed (e.g. a Cholesky factorization after jitter retry).
class NumericalError : public Error {
public:
    using Error::Error;
};

}  // namespace roughkit
