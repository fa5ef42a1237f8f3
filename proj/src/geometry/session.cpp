#include "invdyn/geometry/session.hpp"

namespace invdyn {

CurveData CurveData::make(const Expr& phi, const Expr& psi) {
  CurveData d{phi, psi, differential(phi), differential(psi)};
  return d;
}

CurveData CurveData::swapped() const { return {psi, phi, dpsi, dphi}; }

namespace {

Session build_once(const CurveData& data, const Metric& g) {
  Session s(data, g);
  s.z0_raw = z0_from_data(data.dphi, data.dpsi);
  Rescaled r = rescale_primitive(s.z0_raw);
  s.z0 = r.field;
  s.z0_scale = r.scale;
  if (r.scale != RF(1))
    s.notes.push_back("Z0 rescaled by 1/(" + to_string(r.scale) + ")");
  s.dz = covariant_accel(s.z0);
  s.z1 = raise_index(g, data.dphi);
  s.z2 = raise_index(g, data.dpsi);
  s.dz_phi = data.dphi(s.dz);
  s.dz_psi = data.dpsi(s.dz);
  s.g00 = pairing(g, s.z0, s.z0);
  s.straight_line = s.dz_phi.is_zero() && s.dz_psi.is_zero();
  return s;
}

} // namespace

Session Session::build(const CurveData& data, const Metric& g) {
  Session s = build_once(data, g);
  if (s.straight_line)
    return s;
  if (s.dz_phi.is_zero()) {
    s = build_once(data.swapped(), g);
    s.swapped = true;
    s.notes.insert(s.notes.begin(), "dZ(phi) vanishes identically: phi and psi swapped");
  }
  s.x_raw = s.dz_psi * s.z1 - s.dz_phi * s.z2;
  Rescaled rx = rescale_primitive(s.x_raw);
  s.x = rx.field;
  s.x_scale = rx.scale;
  if (rx.scale != RF(1))
    s.notes.push_back("X rescaled by 1/(" + to_string(rx.scale) + ")");
  s.a = s.g00 / (RF(2) * s.dz_phi);
  return s;
}

VectorField build_X(const Metric& g, const CurveData& data, bool* swapped) {
  Session s = Session::build(data, g);
  if (s.straight_line)
    throw CaseMismatch("X is undefined for straight-line data");
  if (swapped)
    *swapped = s.swapped;
  return s.x;
}

RF build_A(const Metric& g, const CurveData& data) {
  Session s = Session::build(data, g);
  if (s.straight_line)
    throw CaseMismatch("A is undefined for straight-line data");
  return s.a;
}

} // namespace invdyn
