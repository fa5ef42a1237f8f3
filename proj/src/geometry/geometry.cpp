#include "invdyn/geometry/geometry.hpp"

namespace invdyn {

namespace {

const std::array<Symbol, 3>& coords() {
  static const std::array<Symbol, 3> c{sym::x(), sym::y(), sym::z()};
  return c;
}

ZPoly lcm(const ZPoly& a, const ZPoly& b) {
  ZPoly g = gcd(a, b);
  return with_positive_lc(*divide_exact(a, g) * b);
}

} // namespace

RF VectorField::operator()(const RF& f) const { return directional_derivative(*this, f); }
Expr VectorField::operator()(const Expr& f) const { return directional_derivative(*this, f); }

VectorField operator+(const VectorField& a, const VectorField& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
VectorField operator-(const VectorField& a, const VectorField& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
VectorField operator*(const RF& s, const VectorField& v) { return {s * v[0], s * v[1], s * v[2]}; }

RF OneForm::operator()(const VectorField& v) const { return c[0] * v[0] + c[1] * v[1] + c[2] * v[2]; }

std::string to_string(const VectorField& v) {
  return "(" + to_string(v[0]) + ", " + to_string(v[1]) + ", " + to_string(v[2]) + ")";
}

std::string to_string(const OneForm& w) {
  return "(" + to_string(w[0]) + ", " + to_string(w[1]) + ", " + to_string(w[2]) + ")";
}

Metric::Metric(const std::array<RF, 6>& e) {
  for (const auto& x : e)
    if (!x.is_parameter_only())
      throw InputError("metric entry '" + to_string(x) + "' depends on x, y or z");
  g_ = {{{e[0], e[1], e[2]}, {e[1], e[3], e[4]}, {e[2], e[4], e[5]}}};
  std::array<std::array<RF, 3>, 3> cof;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      int r0 = (i + 1) % 3, r1 = (i + 2) % 3, c0 = (j + 1) % 3, c1 = (j + 2) % 3;
      cof[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          (*this)(r0, c0) * (*this)(r1, c1) - (*this)(r0, c1) * (*this)(r1, c0);
    }
  det_ = g_[0][0] * cof[0][0] + g_[0][1] * cof[0][1] + g_[0][2] * cof[0][2];
  if (det_.is_zero())
    throw SingularMetric("metric determinant vanishes identically");
  RF inv_det = det_.inverse();
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      inv_[i][j] = cof[j][i] * inv_det;
}

Metric Metric::euclidean() { return Metric({RF(1), RF(0), RF(0), RF(1), RF(0), RF(1)}); }

Metric Metric::symbolic() { return symbolic_with({}); }

Metric Metric::symbolic_with(const std::map<Symbol, RF>& overrides) {
  std::array<RF, 6> e;
  const auto& params = sym::metric_parameters();
  for (std::size_t k = 0; k < 6; ++k) {
    auto it = overrides.find(params[k]);
    e[k] = it == overrides.end() ? RF::variable(params[k]) : it->second;
  }
  return Metric(e);
}

std::array<RF, 6> Metric::entries() const { return {g_[0][0], g_[0][1], g_[0][2], g_[1][1], g_[1][2], g_[2][2]}; }

bool Metric::is_numeric() const {
  for (const auto& e : entries())
    if (!e.is_constant())
      return false;
  return true;
}

Metric Metric::scaled(const RF& k) const {
  auto e = entries();
  for (auto& x : e)
    x *= k;
  return Metric(e);
}

Metric Metric::instantiate(const Assignment& values) const {
  auto e = entries();
  for (auto& x : e)
    x = x.partial_evaluate(values);
  return Metric(e);
}

OneForm differential(const RF& f) {
  return {f.derivative(sym::x()), f.derivative(sym::y()), f.derivative(sym::z())};
}

OneForm differential(const Expr& f) {
  return {f.derivative(sym::x()).to_rational(), f.derivative(sym::y()).to_rational(),
          f.derivative(sym::z()).to_rational()};
}

RF pairing(const Metric& g, const VectorField& v, const VectorField& w) {
  RF sum;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (!g(i, j).is_zero())
        sum += g(i, j) * v[static_cast<std::size_t>(i)] * w[static_cast<std::size_t>(j)];
  return sum;
}

OneForm lower_index(const Metric& g, const VectorField& v) {
  OneForm out;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      out.c[static_cast<std::size_t>(i)] += g(i, j) * v[static_cast<std::size_t>(j)];
  return out;
}

VectorField raise_index(const Metric& g, const OneForm& w) {
  VectorField out;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      out.c[static_cast<std::size_t>(i)] += g.inverse(i, j) * w[static_cast<std::size_t>(j)];
  return out;
}

VectorField cross(const VectorField& a, const VectorField& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

VectorField z0_from_data(const OneForm& dphi, const OneForm& dpsi) {
  VectorField z = cross({dphi[0], dphi[1], dphi[2]}, {dpsi[0], dpsi[1], dpsi[2]});
  if (z.is_zero())
    throw DegenerateData("d(phi) ^ d(psi) vanishes identically");
  return z;
}

Rescaled rescale_primitive(const VectorField& v) {
  if (v.is_zero())
    throw DegenerateData("cannot rescale the zero vector field");
  ZPoly l(1);
  for (const auto& c : v.c)
    if (!c.is_zero())
      l = lcm(l, c.den());
  std::array<ZPoly, 3> p;
  ZPoly g;
  for (std::size_t i = 0; i < 3; ++i) {
    if (v[i].is_zero())
      continue;
    p[i] = v[i].num() * *divide_exact(l, v[i].den());
    g = gcd(g, p[i]);
  }
  VectorField out;
  for (std::size_t i = 0; i < 3; ++i)
    if (!p[i].is_zero())
      out[i] = RF(*divide_exact(p[i], g));
  return {out, RF::fraction(g, l)};
}

RF directional_derivative(const VectorField& v, const RF& f) {
  RF sum;
  for (std::size_t i = 0; i < 3; ++i)
    if (!v[i].is_zero() && f.depends_on(coords()[i]))
      sum += v[i] * f.derivative(coords()[i]);
  return sum;
}

Expr directional_derivative(const VectorField& v, const Expr& f) {
  std::vector<Expr> terms;
  for (std::size_t i = 0; i < 3; ++i)
    if (!v[i].is_zero() && f.depends_on(coords()[i]))
      terms.push_back(Expr::mul({Expr(v[i]), f.derivative(coords()[i])}));
  return Expr::add(std::move(terms));
}

VectorField covariant_accel(const VectorField& z0) { return {z0(z0[0]), z0(z0[1]), z0(z0[2])}; }

VectorField lie_bracket(const VectorField& v, const VectorField& w) {
  return {v(w[0]) - w(v[0]), v(w[1]) - w(v[1]), v(w[2]) - w(v[2])};
}

RF determinant(const VectorField& a, const VectorField& b, const VectorField& c) {
  return a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) + a[2] * (b[0] * c[1] - b[1] * c[0]);
}

VectorField FrameDecomposition::reconstruct() const {
  return coefficients[0] * basis[0] + coefficients[1] * basis[1] + coefficients[2] * basis[2];
}

const RF& FrameDecomposition::coefficient(std::string_view name) const {
  for (std::size_t i = 0; i < 3; ++i)
    if (names[i] == name)
      return coefficients[i];
  throw Error("no basis field named '" + std::string(name) + "'");
}

FrameDecomposition frame_decompose(const VectorField& w, const std::array<VectorField, 3>& basis,
                                   const std::array<std::string, 3>& names) {
  RF d = determinant(basis[0], basis[1], basis[2]);
  if (d.is_zero())
    throw DegenerateData("frame basis is degenerate");
  RF inv = d.inverse();
  FrameDecomposition out{basis, names, {}};
  out.coefficients[0] = determinant(w, basis[1], basis[2]) * inv;
  out.coefficients[1] = determinant(basis[0], w, basis[2]) * inv;
  out.coefficients[2] = determinant(basis[0], basis[1], w) * inv;
  return out;
}

OneForm alpha0(const Metric& g, const VectorField& z0) { return lower_index(g, z0); }

OneForm beta0(const Metric& g, const VectorField& z0) {
  RF n = pairing(g, z0, z0);
  if (n.is_zero())
    throw DegenerateData("Z0 is a null vector field for this metric");
  OneForm l = lower_index(g, covariant_accel(z0));
  RF s = RF(2) / n;
  return {s * l[0], s * l[1], s * l[2]};
}

VectorField curl(const OneForm& w) {
  return {w[2].derivative(sym::y()) - w[1].derivative(sym::z()), w[0].derivative(sym::z()) - w[2].derivative(sym::x()),
          w[1].derivative(sym::x()) - w[0].derivative(sym::y())};
}

RF d_wedge(const OneForm& a, const OneForm& b) {
  VectorField c = curl(a);
  return c[0] * b[0] + c[1] * b[1] + c[2] * b[2];
}

bool integrability_test(const VectorField& v, const VectorField& w) {
  if (cross(v, w).is_zero())
    throw DegenerateData("integrability test on dependent fields");
  return determinant(v, w, lie_bracket(v, w)).is_zero();
}

} // namespace invdyn
