#pragma once

#include <stdexcept>
#include <string>

namespace funss {

/// Mismatched grid lengths, matrix shapes, or rank requests.
struct DimensionError : std::runtime_error {
  explicit DimensionError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Arguments outside their documented domain (e.g. a mixture weight not in [0,1]).
struct ParameterError : std::invalid_argument {
  explicit ParameterError(const std::string& msg) : std::invalid_argument(msg) {}
};

/// Degenerate or malformed data: all-zero datasets, zero rows under unit-norm, bad draws.
struct DataError : std::runtime_error {
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

/// File parsing/serialization failures; message names the byte offset or line.
struct FormatError : std::runtime_error {
  explicit FormatError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Numerical failures: rank deficiency, pilot eigenvalue collapse, zero eigengap.
struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace funss
