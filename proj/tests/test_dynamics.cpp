#include "invdyn/dynamics/dynamics.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

using namespace testing_support;

namespace {

const char* kCylinderEnergy = "2*PHI*(PSI^2 + 2)*C1 - PSI^2/(2*PHI)*C2 - PSI^2/(2*PHI*(PSI^2 + 1)^2)*C3";
const char* kCylinderPotential = "C1*(x^2 + z^2 + y^2) + C2/y^2 - C3/(x^2 + z^2)";

Session session(const std::string& phi, const std::string& psi, const Metric& g) {
  return Session::build(data(phi, psi), g);
}

CandidateSolution candidate(const std::string& v, std::optional<std::string> e = std::nullopt) {
  CandidateSolution c{ex(v), std::nullopt};
  if (e)
    c.energy = ex(*e);
  return c;
}

struct Pair {
  TrajectoryRecord coarse;
  TrajectoryRecord fine;
};

Pair run(const Session& s, const CandidateSolution& c, const NumericPoint& p, const LaunchPoint& x0) {
  SecondOrderSystem sys = SecondOrderSystem::build(s, c.V, p);
  State s0 = launch(s, c, x0.x0, x0.direction_sign, p).state;
  return {integrate(sys, s0, 1, 1e-3), integrate(sys, s0, 1, 5e-4)};
}

} // namespace

TEST(System, ForceBalancesGradient) {
  Metric g = numeric_metric(2, 1, 0, 2, 0, 1);
  SecondOrderSystem sys = SecondOrderSystem::build(g, ex("x^2*y + ln(z)"), empty_point());
  Vec3 x{0.7, -1.1, 1.3};
  Vec3 a = sys.acceleration(x);
  Vec3 grad{2 * x[0] * x[1], x[0] * x[0], 1 / x[2]};
  for (int i = 0; i < 3; ++i) {
    double sum = grad[static_cast<std::size_t>(i)];
    for (int j = 0; j < 3; ++j)
      sum += g(i, j).constant_value().get_d() * a[static_cast<std::size_t>(j)];
    EXPECT_NEAR(sum, 0, 1e-14);
  }
  EXPECT_THROW(SecondOrderSystem::build(Metric::symbolic(), ex("x"), empty_point()), InputError);
  EXPECT_THROW(SecondOrderSystem::build(Metric::euclidean(), ex("C*x"), empty_point()), InputError);
}

TEST(Integrate, Oscillator) {
  SecondOrderSystem sys = SecondOrderSystem::build(Metric::euclidean(), ex("(x^2 + y^2 + z^2)/2"), empty_point());
  State s0{1, 0.5, -0.3, 0.2, 1, 0.4};
  TrajectoryRecord tr = integrate(sys, s0, 10, 1e-3);
  ASSERT_FALSE(tr.halted);
  ASSERT_EQ(tr.states.size(), 10001u);
  EXPECT_LT(tr.drift.energy, 1e-8);
  double worst = 0;
  for (std::size_t n = 0; n < tr.states.size(); ++n) {
    double t = tr.times[n];
    for (std::size_t i = 0; i < 3; ++i) {
      worst = std::max(worst, std::abs(tr.states[n][i] - (s0[i] * std::cos(t) + s0[3 + i] * std::sin(t))));
      worst = std::max(worst, std::abs(tr.states[n][3 + i] - (-s0[i] * std::sin(t) + s0[3 + i] * std::cos(t))));
    }
  }
  EXPECT_LT(worst, 1e-9);
}

TEST(Integrate, FreeParticleOnStraightLines) {
  Session s = session("x/z", "y/z", Metric::euclidean());
  CandidateSolution c = candidate("0");
  NumericPoint p = empty_point();
  LaunchResult l = launch(s, c, {0.5, -1, 2}, 1, p);
  EXPECT_EQ(l.h_squared, 1);
  EXPECT_DOUBLE_EQ(l.state[3], 0.5);
  TrajectoryRecord tr = integrate(SecondOrderSystem::build(s, c.V, p), l.state, 1, 1e-3);
  EXPECT_LT(tr.drift.phi, 1e-10);
  EXPECT_LT(tr.drift.psi, 1e-10);
  EXPECT_LT(tr.drift.energy, 1e-12);
}

TEST(Launch, Cylinders) {
  Session s = session("(x^2 + y^2)/2", "z/x", Metric::euclidean());
  NumericPoint p = make_parameters({{"C1", 1}, {"C2", 0}, {"C3", 0}});
  // h^2 = 2 C1 / x^2 and Z0 = (x y, -x^2, y z).
  LaunchResult l = launch(s, candidate(kCylinderPotential), {1, 1, 1}, 1, p);
  EXPECT_NEAR(l.h_squared, 2, 1e-14);
  double r = std::sqrt(2.0);
  EXPECT_NEAR(l.state[3], r, 1e-14);
  EXPECT_NEAR(l.state[4], -r, 1e-14);
  EXPECT_NEAR(l.state[5], r, 1e-14);
  EXPECT_NEAR(launch(s, candidate(kCylinderPotential), {1, 1, 1}, -1, p).state[3], -r, 1e-14);
  NumericPoint q = make_parameters({{"C1", -1}, {"C2", 0}, {"C3", 0}});
  EXPECT_THROW(launch(s, candidate(kCylinderPotential), {1, 1, 1}, 1, q), DomainError);
  EXPECT_THROW(launch(s, candidate(kCylinderPotential), {0, 1, 1}, 1, p), DomainError);
}

TEST(Conservation, Cylinders) {
  Session s = session("(x^2 + y^2)/2", "z/x", Metric::euclidean());
  CandidateSolution c = candidate(kCylinderPotential, kCylinderEnergy);
  NumericPoint p = make_parameters({{"C1", 1}, {"C2", 0.5}, {"C3", 0.25}});
  LaunchPoint x0 = find_launch_point(s, c, p, 0, 1, 1e-3);
  Pair r = run(s, c, p, x0);
  ASSERT_FALSE(r.coarse.halted);
  EXPECT_LT(r.coarse.drift.phi, 1e-6);
  EXPECT_LT(r.coarse.drift.psi, 1e-6);
  EXPECT_LT(r.coarse.drift.energy, 1e-6);
  EXPECT_TRUE(order_consistent(r.coarse.drift.phi, r.fine.drift.phi));
  EXPECT_TRUE(order_consistent(r.coarse.drift.psi, r.fine.drift.psi));
  EXPECT_TRUE(order_consistent(r.coarse.drift.energy, r.fine.drift.energy));
  ConservationSummary sum = conservation_report(r.coarse, s, c.energy, p);
  ASSERT_TRUE(sum.energy_match);
  EXPECT_LT(*sum.energy_match, 1e-8);

  SecondOrderSystem mutated = SecondOrderSystem::build(s, ex(std::string(kCylinderPotential) + " + x"), p);
  TrajectoryRecord m = integrate(mutated, launch(s, c, x0.x0, x0.direction_sign, p).state, 1, 1e-3);
  EXPECT_GE(std::max(m.drift.phi, m.drift.psi), 1e-3);
}

TEST(Conservation, ProductsInstance) {
  Session s = session("x*z", "y*z", Metric::euclidean());
  CandidateSolution c = candidate("(x^2 + y^2 + z^2)*(x^2 + y^2 - z^2)/4", "0");
  NumericPoint p = empty_point();
  LaunchPoint x0 = find_launch_point(s, c, p, 0, 1, 1e-3);
  Pair r = run(s, c, p, x0);
  EXPECT_LT(std::max({r.coarse.drift.phi, r.coarse.drift.psi, r.coarse.drift.energy}), 1e-6);
  EXPECT_LT(*conservation_report(r.coarse, s, c.energy, p).energy_match, 1e-8);
}

TEST(Conservation, ShearedProducts) {
  Session s = session("(x + y)*z", "x*y", numeric_metric(2, 1, 1, 2, 1, 0));
  std::string u = "g11/((g11 + g12)*(x - y)^2) - 2*x*y/(x^2 - y^2)^2 - 2*z/((g11 + g12)*(x + y)^3)";
  std::string v = "z/(x + y) + (g11 + g12)/2*ln(x + y) + (g11 - g12)/2*ln(x - y)";
  CandidateSolution c = candidate("(" + u + ")*(" + v + ") + C", "C");
  NumericPoint p = make_parameters({{"C", 0.75}});
  LaunchPoint x0 = find_launch_point(s, c, p, 0, 1, 1e-3);
  Pair r = run(s, c, p, x0);
  ASSERT_FALSE(r.coarse.halted);
  EXPECT_LT(std::max({r.coarse.drift.phi, r.coarse.drift.psi, r.coarse.drift.energy}), 1e-6);
  EXPECT_LT(*conservation_report(r.coarse, s, c.energy, p).energy_match, 1e-8);
}

TEST(Integrate, TimeReversal) {
  Session s = session("(x^2 + y^2)/2", "z/x", Metric::euclidean());
  CandidateSolution c = candidate(kCylinderPotential);
  NumericPoint p = make_parameters({{"C1", 1}, {"C2", 0.5}, {"C3", 0.25}});
  SecondOrderSystem sys = SecondOrderSystem::build(s, c.V, p);
  LaunchPoint x0 = find_launch_point(s, c, p, 1, 1, 1e-3);
  State s0 = launch(s, c, x0.x0, x0.direction_sign, p).state;
  State end = integrate(sys, s0, 1, 1e-3).states.back();
  for (std::size_t i = 3; i < 6; ++i)
    end[i] = -end[i];
  State back = integrate(sys, end, 1, 1e-3).states.back();
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_NEAR(back[i], s0[i], 1e-6);
    EXPECT_NEAR(-back[3 + i], s0[3 + i], 1e-6);
  }
}

TEST(Integrate, HaltsNearSingularity) {
  // z stays 0 and x = 1 - t exactly with a dyadic step, so the last stage lands on x = 0.
  SecondOrderSystem sys = SecondOrderSystem::build(Metric::euclidean(), ex("z^2/x"), empty_point());
  TrajectoryRecord tr = integrate(sys, {1, 0, 0, -1, 0, 0}, 2, 1.0 / 1024);
  EXPECT_TRUE(tr.halted);
  EXPECT_LT(tr.times.back(), 1);
  EXPECT_GT(tr.times.back(), 0.99);
  EXPECT_THROW(integrate(sys, {0, 0, 0, 0, 0, 0}, 1, 1e-3), DomainError);
  EXPECT_THROW(integrate(sys, {1, 0, 0, 0, 0, 0}, 1, 0), InputError);
}

TEST(Record, CsvAndDrift) {
  Session s = session("x*z", "y*z", Metric::euclidean());
  CandidateSolution c = candidate("(x^2 + y^2 + z^2)*(x^2 + y^2 - z^2)/4", "0");
  NumericPoint p = empty_point();
  SecondOrderSystem sys = SecondOrderSystem::build(s, c.V, p);
  LaunchPoint x0 = find_launch_point(s, c, p, 0, 0.01, 1e-3);
  TrajectoryRecord tr = integrate(sys, launch(s, c, x0.x0, x0.direction_sign, p).state, 0.01, 1e-3);
  Drift d = compute_drift(tr);
  EXPECT_EQ(d.phi, tr.drift.phi);
  EXPECT_EQ(d.energy, tr.drift.energy);
  std::ostringstream out;
  write_csv(out, tr);
  std::string text = out.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), "t,x,y,z,vx,vy,vz,phi,psi,E");
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 12);
}

TEST(Order, Floor) {
  EXPECT_TRUE(order_consistent(1.6e-7, 1e-8));
  EXPECT_FALSE(order_consistent(1.6e-7, 1e-7));
  EXPECT_TRUE(order_consistent(3e-15, 4e-15));
}
