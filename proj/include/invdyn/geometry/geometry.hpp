#pragma once

#include "invdyn/kernel/expr.hpp"

#include <array>
#include <string>

namespace invdyn {

/// Vector field on R^3 with rational components.
struct VectorField {
  std::array<RF, 3> c;

  VectorField() = default;
  VectorField(RF a, RF b, RF d) : c{std::move(a), std::move(b), std::move(d)} {}

  const RF& operator[](std::size_t i) const { return c[i]; }
  RF& operator[](std::size_t i) { return c[i]; }
  bool is_zero() const { return c[0].is_zero() && c[1].is_zero() && c[2].is_zero(); }

  /// Directional derivative v(f).
  RF operator()(const RF& f) const;
  Expr operator()(const Expr& f) const;

  friend VectorField operator+(const VectorField& a, const VectorField& b);
  friend VectorField operator-(const VectorField& a, const VectorField& b);
  friend VectorField operator*(const RF& s, const VectorField& v);
  friend bool operator==(const VectorField&, const VectorField&) = default;
};

/// One-form on R^3 with rational components.
struct OneForm {
  std::array<RF, 3> c;

  OneForm() = default;
  OneForm(RF a, RF b, RF d) : c{std::move(a), std::move(b), std::move(d)} {}

  const RF& operator[](std::size_t i) const { return c[i]; }
  bool is_zero() const { return c[0].is_zero() && c[1].is_zero() && c[2].is_zero(); }
  /// Contraction with a vector field.
  RF operator()(const VectorField& v) const;

  friend bool operator==(const OneForm&, const OneForm&) = default;
};

std::string to_string(const VectorField& v);
std::string to_string(const OneForm& w);

/// Constant symmetric non-singular 3x3 matrix whose entries may contain the
/// metric parameters (and free constants) but never x, y, z.
class Metric {
public:
  /// Entries in the order g11, g12, g13, g22, g23, g33.
  explicit Metric(const std::array<RF, 6>& entries);

  static Metric euclidean();
  /// Every entry is its own parameter symbol.
  static Metric symbolic();
  /// The symbolic metric with some parameters replaced by values or expressions.
  static Metric symbolic_with(const std::map<Symbol, RF>& overrides);

  /// 0-based indices.
  const RF& operator()(int i, int j) const { return g_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; }
  const RF& inverse(int i, int j) const { return inv_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; }
  const RF& det() const { return det_; }
  std::array<RF, 6> entries() const;

  /// True when every entry is a rational number.
  bool is_numeric() const;
  Metric scaled(const RF& k) const;
  Metric instantiate(const Assignment& values) const;

  friend bool operator==(const Metric& a, const Metric& b) { return a.g_ == b.g_; }

private:
  std::array<std::array<RF, 3>, 3> g_;
  std::array<std::array<RF, 3>, 3> inv_;
  RF det_;
};

OneForm differential(const RF& f);
/// Differential of an expression whose gradient is rational (throws NonRationalError otherwise).
OneForm differential(const Expr& f);

RF pairing(const Metric& g, const VectorField& v, const VectorField& w);
OneForm lower_index(const Metric& g, const VectorField& v);
VectorField raise_index(const Metric& g, const OneForm& w);

/// Cross product of the gradients; throws DegenerateData if d(phi) ^ d(psi) == 0.
VectorField z0_from_data(const OneForm& dphi, const OneForm& dpsi);

struct Rescaled {
  VectorField field;
  /// original == scale * field
  RF scale;
};

/// Clears denominators with their lcm and removes the gcd of the resulting
/// polynomial components; the overall sign is kept.
Rescaled rescale_primitive(const VectorField& v);

RF directional_derivative(const VectorField& v, const RF& f);
Expr directional_derivative(const VectorField& v, const Expr& f);

/// Components Z0(Z0^i): the covariant acceleration for a constant metric.
VectorField covariant_accel(const VectorField& z0);
VectorField lie_bracket(const VectorField& v, const VectorField& w);
RF determinant(const VectorField& a, const VectorField& b, const VectorField& c);
VectorField cross(const VectorField& a, const VectorField& b);

struct FrameDecomposition {
  std::array<VectorField, 3> basis;
  std::array<std::string, 3> names;
  std::array<RF, 3> coefficients;

  VectorField reconstruct() const;
  const RF& coefficient(std::string_view name) const;
};

/// Coefficients of w in the given basis by Cramer's rule; throws DegenerateData
/// when the basis determinant vanishes identically.
FrameDecomposition frame_decompose(const VectorField& w, const std::array<VectorField, 3>& basis,
                                   const std::array<std::string, 3>& names);

OneForm alpha0(const Metric& g, const VectorField& z0);
/// (2 / g(Z0,Z0)) g(dZ, .); throws DegenerateData when g(Z0,Z0) == 0 identically.
OneForm beta0(const Metric& g, const VectorField& z0);

/// Components of the exterior derivative of a one-form, as the curl vector.
VectorField curl(const OneForm& w);
/// Coefficient of da ^ b against the volume form.
RF d_wedge(const OneForm& a, const OneForm& b);

/// det(v, w, [v, w]) == 0; throws DegenerateData when v ^ w == 0.
bool integrability_test(const VectorField& v, const VectorField& w);

} // namespace invdyn
