#pragma once

#include <stdexcept>
#include <string>

namespace lfi {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Invalid user input: configuration values, datasets, parameter vectors.
class ValidationError : public Error {
  public:
    using Error::Error;
};

/// Degenerate or inconsistent point geometry (collinear, coincident).
class GeometryError : public Error {
  public:
    using Error::Error;
};

/// A forward simulation could not produce output for the given parameter.
class ModelFailure : public Error {
  public:
    using Error::Error;
};

}  // namespace lfi
