#pragma once

#include "invdyn/kernel/gcd.hpp"

#include <map>
#include <memory>
#include <span>

namespace invdyn {

using Assignment = std::map<Symbol, mpq_class>;

/// Canonical quotient of integer polynomials: numerator and denominator are
/// coprime (including integer content) and the denominator has a positive
/// leading coefficient. Zero is 0/1. The denominator is also held as a
/// product of pairwise coprime factors so most cancellations reduce to
/// divisibility tests.
class RationalFunction {
public:
  RationalFunction() : den_(1) {}
  RationalFunction(long c) : num_(c), den_(1) {} // NOLINT(google-explicit-constructor)
  explicit RationalFunction(const mpq_class& c);
  explicit RationalFunction(const ZPoly& p) : num_(p), den_(1) {}
  explicit RationalFunction(const QPoly& p);

  static RationalFunction variable(Symbol s);
  /// Normalizes; throws DivisionByZero when den is zero.
  static RationalFunction fraction(const ZPoly& num, const ZPoly& den);

  const ZPoly& num() const noexcept { return num_; }
  const ZPoly& den() const noexcept { return den_; }

  bool is_zero() const noexcept { return num_.is_zero(); }
  bool is_constant() const noexcept { return num_.is_constant() && den_.is_constant(); }
  bool is_polynomial() const noexcept { return den_.is_constant(); }
  /// Value of a constant function; throws otherwise.
  mpq_class constant_value() const;
  std::uint32_t support() const noexcept { return num_.support() | den_.support(); }
  bool depends_on(Symbol s) const noexcept { return (support() >> s.index()) & 1u; }
  /// True when no x, y, z occur.
  bool is_parameter_only() const noexcept { return (support() & 0x7u) == 0; }

  RationalFunction operator-() const;
  friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b);
  RationalFunction& operator+=(const RationalFunction& b) { return *this = *this + b; }
  RationalFunction& operator-=(const RationalFunction& b) { return *this = *this - b; }
  RationalFunction& operator*=(const RationalFunction& b) { return *this = *this * b; }
  RationalFunction& operator/=(const RationalFunction& b) { return *this = *this / b; }
  RationalFunction pow(long n) const;
  RationalFunction inverse() const;

  /// Throws DifferentiationError for constant-kind symbols.
  RationalFunction derivative(Symbol s) const;

  /// Exact value; throws MissingAssignment or DivisionByZero.
  mpq_class evaluate(const Assignment& point) const;
  /// Replaces the assigned symbols by values, leaving the rest symbolic.
  RationalFunction partial_evaluate(const Assignment& values) const;
  /// Simultaneous substitution of rational functions for symbols.
  RationalFunction compose(const std::map<Symbol, RationalFunction>& bindings) const;

  friend bool operator==(const RationalFunction& a, const RationalFunction& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

  /// Pairwise coprime factorization of the denominator kept alongside it.
  struct Factors;
  friend struct RationalFunctionOps;

private:
  ZPoly num_;
  ZPoly den_;
  std::shared_ptr<const Factors> factors_; // null when den_ is an integer
};

using RF = RationalFunction;

/// "num" or "(num)/(den)" in the expression grammar.
std::string to_string(const RationalFunction& f);

/// Generic evaluation of an integer polynomial, values indexed by symbol index.
template <class T>
T evaluate_poly(const ZPoly& p, std::span<const T> values);

} // namespace invdyn
