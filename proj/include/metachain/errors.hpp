#pragma once

#include <stdexcept>
#include <string>

namespace metachain {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text: bad rational literal, unreadable file, bad JSON/TSV.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Structural or assumption violation in a chain graph.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// An internal post-condition failed; always a bug, never bad input.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

/// Enumeration refused because the state count exceeds the configured cap.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

/// Iterative numerical routine did not converge.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace metachain
