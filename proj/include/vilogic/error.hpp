#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace vilogic {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed formula text. `position()` is a 0-based byte offset.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " at position " + std::to_string(position)), position_(position) {}

  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class ArityError : public Error {
 public:
  using Error::Error;
};

class UnknownConnectiveError : public Error {
 public:
  using Error::Error;
};

class SignatureMismatch : public Error {
 public:
  using Error::Error;
};

class UnboundVariable : public Error {
 public:
  using Error::Error;
};

/// Matrix / direct-system description that cannot be loaded.
class LoadError : public Error {
 public:
  using Error::Error;
};

/// Structural precondition of an operation is violated (invalid direct
/// system, term that is not a partition function, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

}  // namespace vilogic
