#pragma once

#include <stdexcept>
#include <string>

namespace maxtorus {

/// Base class for everything this library throws.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Shape mismatch: non-square determinant input, r > c saturation test, ...
struct dimension_error : error {
    using error::error;
};

/// A face selector that does not describe a face of the given polytope.
struct face_error : error {
    using error::error;
};

/// Structurally malformed input (row counts, ragged data, zero vectors).
struct input_error : error {
    using error::error;
};

/// An operation was invoked outside its stated preconditions
/// (normalize with m != k, circle construction from a non-primitive vector, ...).
struct precondition_error : error {
    using error::error;
};

/// The weighted orbit space fails validation required by the operation.
struct validation_error : error {
    using error::error;
};

/// Malformed document text; `where` points at the offending field or byte.
struct parse_error : error {
    parse_error(const std::string& where, const std::string& what)
        : error(where + ": " + what), location(where) {}
    std::string location;
};

struct io_error : error {
    using error::error;
};

}  // namespace maxtorus
