#include "invdyn/classifier/classifier.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace testing_support;

namespace {

const char* kCylinderEnergy = "2*PHI*(PSI^2 + 2)*C1 - PSI^2/(2*PHI)*C2 - PSI^2/(2*PHI*(PSI^2 + 1)^2)*C3";
const char* kCylinderPotential = "C1*(x^2 + z^2 + y^2) + C2/y^2 - C3/(x^2 + z^2)";

Metric cubic_restricted() { return metric({{"g22", "g11"}, {"g23", "g13"}}); }

bool zero(const Expr& e) { return e.to_rational().is_zero(); }

bool differs_by_constant(const Expr& a, const Expr& b) {
  RF d = (a - b).to_rational();
  return (d.support() & 0x7u) == 0;
}

} // namespace

TEST(StraightLines, Detection) {
  Metric g = Metric::euclidean();
  EXPECT_TRUE(is_straight_line_family(data("x/z", "y/z"), g));
  EXPECT_TRUE(is_straight_line_family(data("x/y", "y + z"), g));
  EXPECT_FALSE(is_straight_line_family(data("x*z", "y*z"), g));
}

TEST(Classify, Case0) {
  EXPECT_EQ(classify(data("x/z", "y/z"), Metric::symbolic()).label, CaseLabel::Case0a);
  EXPECT_EQ(classify(data("x/y", "y + z"), Metric::euclidean()).label, CaseLabel::Case0b);
  ClassificationReport r = classify(data("x/y", "y + z"), metric({{"g13", "0"}, {"g23", "g33"}}));
  EXPECT_EQ(r.label, CaseLabel::Case0a);
  ASSERT_TRUE(r.case0_basis);
  EXPECT_TRUE(lie_bracket((*r.case0_basis)[0], (*r.case0_basis)[1]).is_zero());
  EXPECT_THROW(case0_subcase(data("x*z", "y*z"), Metric::euclidean()), CaseMismatch);
}

TEST(Classify, Case1) {
  ClassificationReport r3 = classify(data("x*z", "y*z"), Metric::euclidean());
  EXPECT_EQ(r3.label, CaseLabel::Case1a1);
  EXPECT_TRUE(r3.xz1->coefficients[2].is_zero());
  EXPECT_EQ(classify(data("x*z", "y*z"), metric({{"g13", "0"}, {"g23", "0"}})).label, CaseLabel::Case1a1);
  ClassificationReport r6 =
      classify(data("(x + y)*z", "x*y"), metric({{"g13", "1"}, {"g23", "1"}, {"g22", "g11"}, {"g33", "0"}}));
  EXPECT_EQ(r6.label, CaseLabel::Case1a2);
  ASSERT_TRUE(r6.beta0_closed);
  EXPECT_TRUE(*r6.beta0_closed);
  RF b = r6.xz1->coefficients[1];
  EXPECT_TRUE((r6.session.x(r6.session.a) + b * r6.session.a).is_zero());
}

TEST(Classify, Case2) {
  ClassificationReport r4 = classify(data("x*y*z + x + y", "z"), Metric::symbolic());
  EXPECT_EQ(r4.label, CaseLabel::Case2c);
  ClassificationReport r4b = classify(data("x*y*z + x + y", "z"), metric({{"g11", "0"}, {"g12", "0"}}));
  EXPECT_EQ(r4b.label, CaseLabel::Case2b);
  EXPECT_TRUE(r4b.F1->is_zero());
  EXPECT_FALSE(r4b.F2->is_zero());
  EXPECT_EQ(classify(data("(x^2 + y^2)/2", "z/x"), Metric::euclidean()).label, CaseLabel::Case2c);
}

TEST(Classify, ReportConsistency) {
  ClassificationReport r = classify(data("x*y*z + x + y", "z"), cubic_restricted());
  ASSERT_TRUE(r.xz1 && r.B && r.C);
  EXPECT_EQ(r.xz1->reconstruct(), lie_bracket(r.session.x, r.session.z1));
  const Session& s = r.session;
  EXPECT_TRUE((*r.B * s.a - (s.x(s.a) + r.xz1->coefficients[1] * s.a)).is_zero());
  EXPECT_TRUE((*r.C - r.xz1->coefficients[2] * s.a).is_zero());
  EXPECT_EQ((*r.G1)[EnergySlot::E], *r.F1);
  EXPECT_EQ((*r.G2)[EnergySlot::E], *r.F2);
  EXPECT_TRUE(compatibility_operator(r)[EnergySlot::E].is_zero());
}

TEST(Classify, ScalingRobustness) {
  CaseLabel base = classify(data("x*y*z + x + y", "z"), Metric::euclidean()).label;
  EXPECT_EQ(classify(data("3*(x*y*z + x + y)", "-z/2"), Metric::euclidean()).label, base);
  EXPECT_EQ(classify(data("x*y*z + x + y", "z"), Metric::euclidean().scaled(RF(5))).label, base);
}

TEST(Classify, SwapRecorded) {
  ClassificationReport r = classify(data("z/x", "(x^2 + y^2)/2"), Metric::euclidean());
  EXPECT_TRUE(r.session.swapped);
  EXPECT_EQ(r.label, CaseLabel::Case2c);
}

TEST(EnergyConditions, Cylinders) {
  ClassificationReport r = classify(data("(x^2 + y^2)/2", "z/x"), Metric::euclidean());
  for (const Expr& e : energy_conditions(r, ex(kCylinderEnergy)))
    EXPECT_TRUE(zero(e));
  EXPECT_FALSE(zero(energy_conditions(r, ex("PHI"))[0]));
  Expr v = candidate_V_from_energy(r, ex(kCylinderEnergy));
  EXPECT_TRUE(differs_by_constant(v, ex(kCylinderPotential)));
}

TEST(EnergyConditions, Cubic) {
  ClassificationReport r = classify(data("x*y*z + x + y", "z"), cubic_restricted());
  ASSERT_EQ(r.label, CaseLabel::Case2c);
  Expr e = ex("C1*PSI^2/(PHI*PSI + 1)");
  EXPECT_TRUE(zero(energy_conditions(r, e)[0]));
  EXPECT_FALSE(zero(energy_conditions(r, ex("PHI"))[0]));
  Expr v = candidate_V_from_energy(r, e);
  EXPECT_TRUE(differs_by_constant(v, ex("2*C1*(g12 - g11)/g11/(x - y)^2")));
}

TEST(EnergyConditions, ConstantEnergy) {
  ClassificationReport r = classify(data("x*y*z + x + y", "z"), metric({{"g11", "0"}, {"g12", "0"}}));
  for (const Expr& e : energy_conditions(r, ex("C")))
    EXPECT_TRUE(zero(e));
  EXPECT_EQ(candidate_V_from_energy(r, ex("C")).to_rational(), rf("C"));
}

TEST(EnergyConditions, Linearity) {
  ClassificationReport r = classify(data("(x^2 + y^2)/2", "z/x"), Metric::euclidean());
  EnergyOperator op = compatibility_operator(r);
  RF a = op.apply(r.session, ex("PHI^2")).to_rational();
  RF b = op.apply(r.session, ex("PHI*PSI")).to_rational();
  RF ab = op.apply(r.session, ex("3*PHI^2 - 2*PHI*PSI")).to_rational();
  EXPECT_EQ(ab, RF(3) * a - RF(2) * b);
}

TEST(EnergyConditions, Mismatch) {
  ClassificationReport r = classify(data("x/z", "y/z"), Metric::euclidean());
  EXPECT_THROW(energy_conditions(r, ex("PHI")), CaseMismatch);
  ClassificationReport r3 = classify(data("x*z", "y*z"), Metric::euclidean());
  EXPECT_THROW(candidate_V_from_energy(r3, ex("PHI")), CaseMismatch);
}
