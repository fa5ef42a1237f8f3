#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace invdyn {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
  ParseError(std::size_t position, const std::string& message)
      : Error("parse error at position " + std::to_string(position) + ": " + message),
        position_(position) {}
  std::size_t position() const noexcept { return position_; }

private:
  std::size_t position_;
};

class UndeclaredSymbol : public Error {
public:
  using Error::Error;
};

/// Raised when an expression needs the exact layer but contains ln/exp/real powers.
class NonRationalError : public Error {
public:
  using Error::Error;
};

class DivisionByZero : public Error {
public:
  using Error::Error;
};

/// Log of a non-positive value, non-integer power of a negative base, ...
class DomainError : public Error {
public:
  using Error::Error;
};

class MissingAssignment : public Error {
public:
  using Error::Error;
};

class DifferentiationError : public Error {
public:
  using Error::Error;
};

/// Curve data with d(phi) ^ d(psi) identically zero, degenerate frames, ...
class DegenerateData : public Error {
public:
  using Error::Error;
};

class SingularMetric : public Error {
public:
  using Error::Error;
};

class CaseMismatch : public Error {
public:
  using Error::Error;
};

/// X(A) + b A failed to vanish on an integrable span{X, Z1}. Always a bug.
class TheoremViolation : public Error {
public:
  using Error::Error;
};

class InputError : public Error {
public:
  using Error::Error;
};

} // namespace invdyn
