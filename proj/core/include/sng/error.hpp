#pragma once

#include <stdexcept>
#include <string>

namespace sng {

// Base for every error thrown by the library. Callers that only need a
// diagnostic can catch this; the CLI maps it to a nonzero exit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  DimensionMismatch(std::size_t expected, std::size_t got)
      : Error("dimension mismatch: expected " + std::to_string(expected) +
              ", got " + std::to_string(got)) {}
};

// Argument outside the mathematical domain of a function.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Violated operation precondition (bad parameter combination, empty input).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// A structure failed one of its invariants (e.g. a loaded graph).
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

enum class FormatErrorKind {
  kMalformedHeader,
  kInconsistentDimension,
  kTruncated,
  kMagicMismatch,
  kTrailingData,
};

class FormatError : public Error {
 public:
  FormatError(FormatErrorKind kind, const std::string& what)
      : Error(what), kind_(kind) {}
  FormatErrorKind kind() const noexcept { return kind_; }

 private:
  FormatErrorKind kind_;
};

class LengthMismatch : public Error {
 public:
  using Error::Error;
};

}  // namespace sng
