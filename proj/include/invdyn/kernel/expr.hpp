#pragma once

#include "invdyn/kernel/rational_function.hpp"

#include <array>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace invdyn {

/// Diagnostics collected during floating-point evaluation.
struct EvalStats {
  /// Smallest |denominator| met: polynomial denominators, bases raised to
  /// negative powers, arguments of ln.
  double min_abs_denominator = std::numeric_limits<double>::infinity();
  double min_log_argument = std::numeric_limits<double>::infinity();
};

/// Point for floating-point evaluation, indexed by symbol index. NaN marks
/// an unassigned symbol.
using NumericPoint = std::array<double, kMaxSymbols>;
NumericPoint empty_point();

/// Immutable expression tree for functions beyond the rational ones.
///
/// The factory functions (add, mul, pow, ...) produce canonical trees: any
/// rational subtree collapses to a single constant, symbol or rational node,
/// sums and products are flattened and keep their rational part first. The
/// raw_* builders keep the structure as written and are used by the parser.
class Expr {
public:
  enum class Kind { constant, symbol, rational, sum, product, power, log, exp };

  Expr(); // 0
  Expr(long c); // NOLINT(google-explicit-constructor)
  explicit Expr(const mpq_class& c);
  explicit Expr(Symbol s);
  explicit Expr(const RationalFunction& f);

  static Expr add(std::vector<Expr> terms);
  static Expr mul(std::vector<Expr> factors);
  static Expr pow(const Expr& base, const Expr& exponent);
  static Expr log(const Expr& arg);
  static Expr exp(const Expr& arg);

  static Expr raw_sum(std::vector<Expr> terms);
  static Expr raw_product(std::vector<Expr> factors);
  static Expr raw_power(const Expr& base, const Expr& exponent);
  static Expr raw_log(const Expr& arg);
  static Expr raw_exp(const Expr& arg);

  Kind kind() const noexcept;
  const mpq_class& value() const;            // constant
  Symbol symbol() const;                     // symbol
  const RationalFunction& rational() const;  // rational
  const std::vector<Expr>& args() const;     // sum, product, power (base, exponent), log, exp

  bool is_zero() const;
  bool is_constant_value(long c) const;
  /// Symbols occurring anywhere, as a bit mask over symbol indices.
  std::uint32_t support() const;
  bool depends_on(Symbol s) const { return (support() >> s.index()) & 1u; }

  /// Rational function equal to this tree, or nullopt if a ln/exp or a
  /// non-integer power occurs.
  std::optional<RationalFunction> as_rational() const;
  /// As as_rational, throwing NonRationalError.
  RationalFunction to_rational() const;
  /// Rebuilds through the canonical factories.
  Expr canonical() const;

  Expr derivative(Symbol s) const;
  /// Simultaneous substitution; canonical result.
  Expr substitute(const std::map<Symbol, Expr>& bindings) const;

  double evaluate(const NumericPoint& point, EvalStats* stats = nullptr) const;
  mpq_class evaluate_exact(const Assignment& point) const;

  friend Expr operator+(const Expr& a, const Expr& b) { return add({a, b}); }
  friend Expr operator-(const Expr& a, const Expr& b) { return add({a, mul({Expr(-1), b})}); }
  friend Expr operator*(const Expr& a, const Expr& b) { return mul({a, b}); }
  friend Expr operator/(const Expr& a, const Expr& b) { return mul({a, pow(b, Expr(-1))}); }
  Expr operator-() const { return mul({Expr(-1), *this}); }

  friend bool operator==(const Expr& a, const Expr& b);

  struct Node;

private:
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// Printer emitting the input grammar; parse(to_string(e)).canonical() == e
/// for canonical e.
std::string to_string(const Expr& e);

} // namespace invdyn
