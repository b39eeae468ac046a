#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace zonal {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input outside the mathematical domain of an operation (e >= 1, a < R, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Malformed line in a coefficient file.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Required header metadata (mu, radius) missing or invalid.
class MetadataError : public Error {
 public:
  using Error::Error;
};

/// The same (n, m) pair appears twice in one file.
class DuplicateError : public ParseError {
 public:
  DuplicateError(std::size_t line, int n, int m);
};

/// A normalization factor is not representable in double precision.
class OverflowError : public Error {
 public:
  using Error::Error;
};

}  // namespace zonal
