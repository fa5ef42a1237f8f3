#include "support.hpp"

#include <gtest/gtest.h>

using namespace testing_support;

TEST(Z0, CrossProductOfGradients) {
  auto d = data("x/z", "y/z");
  VectorField z0 = z0_from_data(d.dphi, d.dpsi);
  EXPECT_EQ(z0, vf("x/z^3", "y/z^3", "1/z^2"));
  Rescaled r = rescale_primitive(z0);
  EXPECT_EQ(r.field, vf("x", "y", "z"));
  EXPECT_EQ(r.scale, rf("1/z^3"));
  auto d3 = data("x*z", "y*z");
  EXPECT_EQ(rescale_primitive(z0_from_data(d3.dphi, d3.dpsi)).field, vf("-x", "-y", "z"));
  auto bad = data("x", "x");
  EXPECT_THROW(z0_from_data(bad.dphi, bad.dpsi), DegenerateData);
}

TEST(Rescale, Primitive) {
  Rescaled a = rescale_primitive(vf("x", "y", "z"));
  EXPECT_EQ(a.field, vf("x", "y", "z"));
  EXPECT_EQ(a.scale, RF(1));
  Rescaled b = rescale_primitive(vf("-x/y^2", "-1/y", "1/y"));
  EXPECT_EQ(b.field, vf("-x", "-y", "y"));
  EXPECT_EQ(b.scale, rf("1/y^2"));
  Rescaled c = rescale_primitive(vf("2*x/3", "4*y", "0"));
  EXPECT_EQ(c.field, vf("x", "6*y", "0"));
  EXPECT_EQ(c.scale, rf("2/3"));
  EXPECT_THROW(rescale_primitive(VectorField{}), DegenerateData);
}

TEST(RaiseIndex, Examples) {
  auto d = data("x/y", "y + z");
  VectorField z1 = raise_index(Metric::euclidean(), d.dphi);
  EXPECT_EQ(rescale_primitive(z1).field, vf("y", "-x", "0"));
  EXPECT_EQ(raise_index(Metric::euclidean(), OneForm{RF(1), RF(0), RF(0)}), vf("1", "0", "0"));
  Metric g = Metric::symbolic();
  VectorField z2 = raise_index(g, differential(rf("z")));
  VectorField expected{g.inverse(0, 2), g.inverse(1, 2), g.inverse(2, 2)};
  EXPECT_EQ(z2, expected);
  Metric g2 = metric({{"g13", "0"}, {"g23", "0"}});
  EXPECT_EQ(rescale_primitive(raise_index(g2, differential(rf("z")))).field, vf("0", "0", "1"));
  OneForm w{rf("x*y"), rf("1/z"), rf("g12")};
  EXPECT_EQ(lower_index(g, raise_index(g, w)), w);
}

TEST(Pairing, Identities) {
  for (const auto& [p, q] : std::vector<std::pair<const char*, const char*>>{
           {"x/z", "y/z"}, {"x/y", "y + z"}, {"x*z", "y*z"}, {"x*y*z + x + y", "z"}, {"(x + y)*z", "x*y"}}) {
    Metric g = metric({{"g13", "1"}, {"g22", "g11"}});
    Session s = Session::build(data(p, q), g);
    EXPECT_TRUE(pairing(g, s.z0, s.z1).is_zero()) << p;
    EXPECT_TRUE(pairing(g, s.z0, s.z2).is_zero()) << p;
    RF g12 = pairing(g, s.z1, s.z2);
    EXPECT_TRUE((g12 - s.z2(s.data.phi.to_rational())).is_zero());
    EXPECT_TRUE((g12 - s.z1(s.data.psi.to_rational())).is_zero());
    EXPECT_TRUE((pairing(g, s.z1, s.dz) - s.dz_phi).is_zero());
    EXPECT_TRUE((pairing(g, s.z2, s.dz) - s.dz_psi).is_zero());
    EXPECT_TRUE(s.z0(s.data.phi.to_rational()).is_zero());
    EXPECT_TRUE(s.z0(s.data.psi.to_rational()).is_zero());
    if (!s.straight_line) {
      EXPECT_TRUE(pairing(g, s.x, s.z0).is_zero());
      EXPECT_TRUE(pairing(g, s.x, s.dz).is_zero());
    }
  }
  EXPECT_EQ(pairing(Metric::euclidean(), vf("1", "0", "0"), vf("1", "0", "0")), RF(1));
}

TEST(DirectionalDerivative, Examples) {
  EXPECT_TRUE(directional_derivative(vf("-x", "-y", "z"), rf("x*z")).is_zero());
  EXPECT_EQ(directional_derivative(vf("x", "y", "z"), rf("x^2 + y^2 + z^2")), rf("2*(x^2 + y^2 + z^2)"));
  Expr e = directional_derivative(vf("1", "0", "0"), ex("ln(x - y)"));
  EXPECT_EQ(e.to_rational(), rf("1/(x - y)"));
}

TEST(CovariantAccel, Examples) {
  EXPECT_EQ(covariant_accel(vf("-x", "-y", "z")), vf("x", "y", "z"));
  EXPECT_EQ(covariant_accel(vf("-x", "-y", "y")), vf("x", "y", "-y"));
  EXPECT_TRUE(covariant_accel(vf("1", "1", "1")).is_zero());
}

TEST(LieBracket, Examples) {
  EXPECT_TRUE(lie_bracket(vf("1", "0", "0"), vf("0", "1", "0")).is_zero());
  EXPECT_EQ(lie_bracket(vf("y", "-x", "0"), vf("0", "1", "1")), vf("-1", "0", "0"));
  VectorField v = vf("x*y", "z^2", "1/x");
  EXPECT_TRUE(lie_bracket(v, v).is_zero());
}

TEST(BuildX, Examples) {
  Metric g = Metric::symbolic();
  VectorField x4 = build_X(g, data("x*y*z + x + y", "z"));
  EXPECT_TRUE(constant_multiple(x4, vf("g13*g22 - g12*g23", "g11*g23 - g13*g12", "-(g11*g22 - g12^2)")));
  CurveData d5 = data("(x^2 + y^2)/2", "z/x");
  EXPECT_TRUE(constant_multiple(Session::build(d5, Metric::euclidean()).z0, vf("x*y", "-x^2", "y*z")));
  EXPECT_TRUE(constant_multiple(build_X(Metric::euclidean(), d5), vf("-z", "0", "x")));
  EXPECT_TRUE(constant_multiple(build_X(g, d5), vf("(g12*g23 - g13*g22)*x + (g23^2 - g22*g33)*z",
                                                   "(g12*g13 - g11*g23)*x + (g12*g33 - g13*g23)*z",
                                                   "(g11*g22 - g12^2)*x + (g13*g22 - g12*g23)*z")));
  EXPECT_THROW(build_X(g, data("x/z", "y/z")), CaseMismatch);
}

TEST(BuildA, Examples) {
  Metric g = metric({{"g13", "1"}, {"g23", "1"}, {"g22", "g11"}, {"g33", "0"}});
  RF a = build_A(g, data("(x + y)*z", "x*y"));
  RF expected = rf("-1/2 + (g11*(x + y)^3 - 2*(g11 + g12)*x*y*(x + y))/(4*z*(x - y)^2)");
  EXPECT_EQ(a, expected);

  // Rescaling Z0 leaves A unchanged: build A from rho*Z0 by hand.
  Session s = Session::build(data("(x + y)*z", "x*y"), g);
  VectorField z = rf("x") * s.z0;
  VectorField dz = covariant_accel(z);
  EXPECT_EQ(pairing(g, z, z) / (RF(2) * s.data.dphi(dz)), s.a);

  // Oracle values of A for xz, yz with the Euclidean metric, at five points (floating-point evaluation of the definition).
  RF a3 = build_A(Metric::euclidean(), data("x*z", "y*z"));
  const double pts[5][3] = {{1, 2, 3}, {0.5, -1, 2}, {-1.5, 0.25, 1}, {2, 2, -1}, {0.75, 1.25, -0.5}};
  for (const auto& p : pts) {
    double x = p[0], y = p[1], z = p[2];
    // Z0 = (-x, -y, z), dZ = (x, y, z), grad phi = (z, 0, x)
    double oracle = 0.5 * (x * x + y * y + z * z) / (z * x + x * z);
    mpq_class v = a3.evaluate({{sym::x(), mpq_class(x)}, {sym::y(), mpq_class(y)}, {sym::z(), mpq_class(z)}});
    EXPECT_NEAR(v.get_d(), oracle, 1e-12);
  }
}

TEST(FrameDecompose, Examples) {
  Session s = Session::build(data("x*z", "y*z"), metric({{"g13", "0"}, {"g23", "0"}}));
  std::array<VectorField, 3> basis{s.x, s.z1, s.z0};
  std::array<std::string, 3> names{"X", "Z1", "Z0"};
  auto fx = frame_decompose(s.x, basis, names);
  EXPECT_EQ(fx.coefficients[0], RF(1));
  EXPECT_TRUE(fx.coefficients[1].is_zero());
  auto f2 = frame_decompose(RF(2) * s.z1 + s.z0, basis, names);
  EXPECT_EQ(f2.coefficients[1], RF(2));
  EXPECT_EQ(f2.coefficients[2], RF(1));
  auto fb = frame_decompose(lie_bracket(s.x, s.z1), basis, names);
  EXPECT_TRUE(fb.coefficient("Z0").is_zero());
  EXPECT_EQ(fb.reconstruct(), lie_bracket(s.x, s.z1));
  EXPECT_THROW(frame_decompose(s.x, {s.x, s.x, s.z0}, names), DegenerateData);
}

TEST(Alpha0Beta0, Examples) {
  VectorField z0 = vf("-x", "-y", "z");
  OneForm a = alpha0(Metric::euclidean(), z0);
  EXPECT_EQ(a, (OneForm{rf("-x"), rf("-y"), rf("z")}));
  Metric g = metric({{"g13", "0"}, {"g23", "0"}});
  Session s = Session::build(data("x*z", "y*z"), g);
  OneForm b = beta0(g, s.z0);
  EXPECT_EQ(b(s.a * s.z1), RF(1));
  EXPECT_TRUE(b(s.x).is_zero());
  EXPECT_TRUE(alpha0(g, s.z0)(s.x).is_zero());
  Metric null_metric = numeric_metric(1, 0, 0, 1, 0, -1);
  EXPECT_THROW(beta0(null_metric, vf("1", "0", "1")), DegenerateData);
}

TEST(Integrability, Examples) {
  Session s2 = Session::build(data("x/y", "y + z"), Metric::euclidean());
  EXPECT_FALSE(integrability_test(s2.z1, s2.z2));
  EXPECT_EQ(rescale_primitive(s2.z1).field, vf("y", "-x", "0"));
  Session s1 = Session::build(data("x/z", "y/z"), Metric::symbolic());
  EXPECT_TRUE(integrability_test(s1.z1, s1.z2));
  EXPECT_TRUE(integrability_test(vf("1", "0", "0"), vf("0", "1", "1")));
  EXPECT_THROW(integrability_test(vf("x", "y", "z"), vf("2*x", "2*y", "2*z")), DegenerateData);
}

TEST(Integrability, DualFormMatches) {
  for (const auto& [p, q] : std::vector<std::pair<const char*, const char*>>{
           {"x*z", "y*z"}, {"(x + y)*z", "x*y"}, {"x*y*z + x + y", "z"}, {"x^2 + y^2 + z^2", "x*y + y*z"}}) {
    for (const Metric& g : {Metric::euclidean(), numeric_metric(2, 1, 1, 2, 1, 0), numeric_metric(1, 0, 0, 2, 0, 3)}) {
      Session s = Session::build(data(p, q), g);
      OneForm a0 = alpha0(g, s.z0);
      EXPECT_EQ(integrability_test(s.x, s.z1), d_wedge(a0, a0).is_zero()) << p;
      if (d_wedge(a0, a0).is_zero())
        EXPECT_TRUE(d_wedge(beta0(g, s.z0), a0).is_zero()) << p;
    }
  }
}

TEST(Rescaling, Invariance) {
  Metric g = numeric_metric(2, 1, 1, 2, 1, 0);
  Session s = Session::build(data("(x + y)*z", "x*y"), g);
  for (const char* rho_text : {"x", "y^2", "3*x*z"}) {
    RF rho = rf(rho_text);
    VectorField z = rho * s.z0;
    VectorField dz = covariant_accel(z);
    RF a = pairing(g, z, z) / (RF(2) * s.data.dphi(dz));
    EXPECT_EQ(a, s.a);
    VectorField x = s.data.dpsi(dz) * s.z1 - s.data.dphi(dz) * s.z2;
    EXPECT_TRUE(constant_multiple(rescale_primitive(x).field, s.x) ||
                constant_multiple(x, (rho * rho) * s.x_raw));
    EXPECT_TRUE(constant_multiple(x, (rho * rho) * s.x_raw));
    EXPECT_EQ(integrability_test(x, s.z1), integrability_test(s.x, s.z1));
  }
}
