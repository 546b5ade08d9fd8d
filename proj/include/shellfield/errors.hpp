// Exception hierarchy shared by all shellfield modules.

#ifndef SHELLFIELD_ERRORS_HPP_
#define SHELLFIELD_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace shellfield {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of a function (nu <= 0, x < 0, ...).
struct DomainError : Error {
  using Error::Error;
};

// Result would overflow the double range.
struct RangeError : Error {
  RangeError(const std::string& msg, double threshold)
    : Error(msg), threshold(threshold) {}
  double threshold;
};

// Structurally invalid argument (dimension mismatch, index out of range).
struct ArgumentError : Error {
  using Error::Error;
};

// Unknown name in a registry (bundled table, atom type).
struct LookupError : Error {
  using Error::Error;
};

struct QuadratureError : Error {
  QuadratureError(const std::string& msg, double value, double error_estimate)
    : Error(msg), value(value), error_estimate(error_estimate) {}
  double value;
  double error_estimate;
};

// Malformed input file or document.
struct FormatError : Error {
  using Error::Error;
};

// File could not be opened, read or written.
struct IoError : Error {
  using Error::Error;
};

}  // namespace shellfield

#endif  // SHELLFIELD_ERRORS_HPP_
