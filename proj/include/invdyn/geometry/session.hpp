#pragma once

#include "invdyn/geometry/geometry.hpp"

#include <vector>

namespace invdyn {

/// The two surface families. The expressions may be non-rational as long as
/// their gradients are rational (e.g. ln(z) + k*y^3).
struct CurveData {
  Expr phi;
  Expr psi;
  OneForm dphi;
  OneForm dpsi;

  static CurveData make(const Expr& phi, const Expr& psi);
  CurveData swapped() const;
};

/// Every geometric object of one problem, built from a single primitively
/// rescaled Z0. After a swap, phi and psi refer to the exchanged data.
struct Session {
  Session(CurveData d, Metric g) : data(std::move(d)), metric(std::move(g)) {}

  CurveData data;
  Metric metric;
  bool swapped = false;

  VectorField z0_raw;
  VectorField z0;
  RF z0_scale; // z0_raw == z0_scale * z0
  VectorField dz;
  VectorField z1;
  VectorField z2;
  RF dz_phi;
  RF dz_psi;
  RF g00; // g(Z0, Z0)
  bool straight_line = false;

  // Only when !straight_line.
  VectorField x_raw;
  VectorField x;
  RF x_scale; // x_raw == x_scale * x
  RF a;

  std::vector<std::string> notes;

  static Session build(const CurveData& data, const Metric& g);
};

/// X after the swap convention and primitive rescaling; throws CaseMismatch on straight-line data.
VectorField build_X(const Metric& g, const CurveData& data, bool* swapped = nullptr);
/// A = g(Z0,Z0) / (2 dZ(phi)); throws CaseMismatch on straight-line data.
RF build_A(const Metric& g, const CurveData& data);

} // namespace invdyn
