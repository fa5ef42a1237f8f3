#include "invdyn/metric_search/metric_search.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace testing_support;

namespace {

const char* kSec6Phi = "(x + y)*z";
const char* kSec6Psi = "x*y";

ZPoly zp(const std::string& text) { return rf(text).num(); }

bool all_vanish(const std::vector<Condition>& cs, const std::array<double, 6>& g) {
  return condition_residual(cs, g) < 1e-24;
}

} // namespace

TEST(Extract, ShearedProducts) {
  ConditionSystem sys = extract_case1_conditions(data(kSec6Phi, kSec6Psi));
  ASSERT_FALSE(sys.conditions.empty());
  for (const auto& c : sys.conditions)
    EXPECT_EQ(c.poly.support() & 0x7u, 0u) << to_string(c.poly);
  // The known solution conditions imply every extracted one.
  std::array<double, 6> on{1, 0.25, -0.5, 1, -0.5, 0};
  EXPECT_TRUE(all_vanish(sys.conditions, on));
  EXPECT_TRUE(all_vanish(sys.dual_conditions, on));
  EXPECT_FALSE(all_vanish(sys.conditions, {1, 0, 0, 1, 0, 1}));
}

TEST(Extract, ExactlyTheCoefficientsOfC) {
  CurveData d = data(kSec6Phi, kSec6Psi);
  ConditionSystem sys = extract_case1_conditions(d);
  Metric g({RF(2), RF(1), RF(1), RF(2), RF(1), RF(0)});
  Assignment at{{sym::g(1, 1), 2}, {sym::g(1, 2), 1}, {sym::g(1, 3), 1},
                {sym::g(2, 2), 2}, {sym::g(2, 3), 1}, {sym::g(3, 3), 0}};
  for (const auto& c : sys.conditions)
    EXPECT_EQ(RF(c.poly).evaluate(at), 0);
  EXPECT_TRUE(is_case1(classify(d, g).label));
  Assignment off = at;
  off[sym::g(3, 3)] = 1;
  bool some_nonzero = false;
  for (const auto& c : sys.conditions)
    some_nonzero = some_nonzero || RF(c.poly).evaluate(off) != 0;
  EXPECT_TRUE(some_nonzero);
  EXPECT_FALSE(is_case1(classify(d, Metric({RF(2), RF(1), RF(1), RF(2), RF(1), RF(1)})).label));
}

TEST(Extract, OtherData) {
  ConditionSystem products = extract_case1_conditions(data("x*z", "y*z"));
  EXPECT_TRUE(all_vanish(products.conditions, {0.6, 0.2, 0, 0.7, 0, -0.3}));
  ConditionSystem second = extract_case1_conditions(data("x*y^2/2", "z*y^2"));
  EXPECT_TRUE(all_vanish(second.conditions, {0.5, 0, 0, -0.6, 0, 0.62}));
  EXPECT_THROW(extract_case1_conditions(data("x/z", "y/z")), CaseMismatch);
}

TEST(Solve, ShearedProducts) {
  CurveData d = data(kSec6Phi, kSec6Psi);
  ConditionSystem sys = extract_case1_conditions(d);
  std::vector<MetricCandidate> found = solve_numeric(sys, {.restarts = 200, .seed = 0});
  ASSERT_FALSE(found.empty());
  for (const auto& m : found) {
    const auto& e = m.entries;
    double norm = 0;
    for (double v : e)
      norm += v * v;
    EXPECT_NEAR(norm, 1, 1e-12);
    EXPECT_LT(std::abs(e[2] - e[4]), 1e-6);
    EXPECT_LT(std::abs(e[5]), 1e-6);
    EXPECT_LT(std::abs(e[0] - e[3]), 1e-6);
    EXPECT_GT(std::abs(e[0] - e[1]), 1e-6);
    EXPECT_GT(std::abs(m.det), 1e-6);
    EXPECT_LT(m.dual_residual, 1e-12);
  }
  for (std::size_t i = 1; i < found.size(); ++i)
    EXPECT_LE(found[i - 1].residual, found[i].residual);
  Certification c = certify_candidate(d, found.front(), sys);
  EXPECT_TRUE(c.certified) << c.note;
  EXPECT_EQ(c.label, CaseLabel::Case1a2);
}

TEST(Solve, Products) {
  CurveData d = data("x*z", "y*z");
  ConditionSystem sys = extract_case1_conditions(d);
  std::vector<MetricCandidate> found = solve_numeric(sys, {.restarts = 50, .seed = 1});
  ASSERT_FALSE(found.empty());
  EXPECT_LT(std::abs(found.front().entries[2]), 1e-6);
  EXPECT_LT(std::abs(found.front().entries[4]), 1e-6);
  EXPECT_TRUE(certify_candidate(d, found.front(), sys).certified);
}

TEST(Solve, CubicHasNoCase1Metric) {
  CurveData d = data("x*y*z + x + y", "z");
  ConditionSystem sys = extract_case1_conditions(d);
  for (const auto& m : solve_numeric(sys, {.restarts = 200, .seed = 0}))
    EXPECT_FALSE(certify_candidate(d, m, sys).certified);
}

TEST(Solve, UnsatisfiableControl) {
  ConditionSystem sys;
  sys.conditions.push_back({zp("g11^2 + 1"), "1"});
  EXPECT_TRUE(solve_numeric(sys, {.restarts = 20}).empty());
}

TEST(Solve, Deterministic) {
  ConditionSystem sys = extract_case1_conditions(data(kSec6Phi, kSec6Psi));
  auto a = solve_numeric(sys, {.restarts = 40, .seed = 5});
  auto b = solve_numeric(sys, {.restarts = 40, .seed = 5});
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    EXPECT_EQ(a[i].entries, b[i].entries);
}

TEST(Rationalize, RoundsAndChecks) {
  ConditionSystem sys = extract_case1_conditions(data(kSec6Phi, kSec6Psi));
  MetricCandidate m;
  double s = 1 / std::sqrt(4 + 1 + 1 + 4 + 1);
  m.entries = {2 * s, 1 * s, -1 * s, 2 * s, -1 * s, 1e-13};
  auto q = rationalize(m, sys);
  ASSERT_TRUE(q);
  EXPECT_EQ((*q)[0], 1);
  EXPECT_EQ((*q)[1], mpq_class(1, 2));
  EXPECT_EQ((*q)[2], mpq_class(-1, 2));
  EXPECT_EQ((*q)[5], 0);
  m.entries[5] = 0.05;
  EXPECT_FALSE(rationalize(m, sys));
}
