#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace loj {

/// Base of every error thrown by the core library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed polynomial, series or curve text. Carries the byte offset of the
/// offending token.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " at position " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// Operands of incompatible shape (variable counts, vector lengths, windows).
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Argument outside an operation's domain (n < 1, r <= 0, division by zero).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Numeric failure: non-finite objective, too few converged samples.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace loj
