#pragma once

#include <stdexcept>
#include <string>

namespace qhm {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or inadmissible input (bad weights, repeated roots, schema violations).
class InputError : public Error {
public:
    using Error::Error;
};

/// Operation requested for a germ type it is not defined on.
class UnsupportedTypeError : public InputError {
public:
    using InputError::InputError;
};

/// Two objects that cannot be compared (different weights, degrees or types).
class IncomparableError : public InputError {
public:
    using InputError::InputError;
};

/// A homotopy solve that left paths unresolved.
class IncompleteSolveError : public Error {
public:
    using Error::Error;
};

}  // namespace qhm
