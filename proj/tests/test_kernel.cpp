#include "invdyn/kernel/parser.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace invdyn;

namespace {

SymbolTable table() {
  SymbolTable t = SymbolTable::with_formal_arguments();
  for (const char* c : {"C", "C1", "C2", "C3", "k"})
    t.declare(c);
  return t;
}

RF rf(const std::string& text) { return parse(text, table()).to_rational(); }
Expr ex(const std::string& text) { return parse_canonical(text, table()); }

RF var(const char* name) { return RF::variable(Symbol::intern(name)); }

} // namespace

TEST(Parse, StructureFollowsParentheses) {
  Expr e = parse("(x+y)*z", table());
  ASSERT_EQ(e.kind(), Expr::Kind::product);
  ASSERT_EQ(e.args().size(), 2u);
  EXPECT_EQ(e.args()[0].kind(), Expr::Kind::sum);
  EXPECT_EQ(e.args()[1].kind(), Expr::Kind::symbol);
  EXPECT_EQ(e.args()[1].symbol(), sym::z());
}

TEST(Parse, SingleSymbol) {
  Expr e = parse("x", table());
  ASSERT_EQ(e.kind(), Expr::Kind::symbol);
  EXPECT_EQ(e.symbol(), sym::x());
}

TEST(Parse, QuotientIsRational) {
  RF f = rf("x*y^2/2");
  EXPECT_EQ(f, var("x") * var("y").pow(2) / RF(2));
  EXPECT_EQ(to_string(f), "x*y^2/2");
}

TEST(Parse, Precedence) {
  EXPECT_EQ(rf("-x^2"), -(var("x").pow(2)));
  EXPECT_EQ(rf("2*3^2"), RF(18));
  EXPECT_EQ(rf("1 - 2 - 3"), RF(-4));
  EXPECT_EQ(rf("12/3/2"), RF(2));
  EXPECT_EQ(rf("2^-1"), RF(mpq_class(1, 2)));
  EXPECT_EQ(rf("0.25*x"), var("x") / RF(4));
}

TEST(Parse, Errors) {
  try {
    parse("x + * y", table());
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position(), 4u);
  }
  EXPECT_THROW(parse("(x + y", table()), ParseError);
  EXPECT_THROW(parse("x y", table()), ParseError);
  EXPECT_THROW(parse("x + w", table()), UndeclaredSymbol);
  EXPECT_THROW(parse("", table()), ParseError);
}

TEST(ToRational, Cancellation) {
  EXPECT_TRUE(rf("x/z - x/z").is_zero());
  RF f = rf("x*y*z + x + y");
  EXPECT_TRUE(f.is_polynomial());
  EXPECT_EQ(f.num().size(), 3u);
  EXPECT_THROW(parse("ln(x)", table()).to_rational(), NonRationalError);
}

TEST(ToRational, CanonicalDenominator) {
  RF f = rf("(x^2 - y^2)/(y - x)");
  EXPECT_EQ(f, -(var("x") + var("y")));
  RF g = rf("(2*x)/(-4*y)");
  EXPECT_EQ(to_string(g), "(-x)/(2*y)");
  EXPECT_GT(sgn(g.den().leading().coeff), 0);
}

TEST(Differentiate, QuotientRule) {
  EXPECT_EQ(rf("x/z").derivative(sym::z()), rf("-x/z^2"));
  EXPECT_EQ(rf("g11*x^2").derivative(sym::x()), rf("2*g11*x"));
  EXPECT_THROW(rf("g11*x").derivative(sym::g(1, 1)), DifferentiationError);
  EXPECT_THROW(ex("k*x").derivative(Symbol::intern("k")), DifferentiationError);
}

TEST(Differentiate, ChainRule) {
  Expr d = ex("ln(x - y)").derivative(sym::x());
  ASSERT_TRUE(d.as_rational());
  EXPECT_EQ(*d.as_rational(), rf("1/(x - y)"));
  Expr e = ex("exp(x^2)").derivative(sym::x());
  NumericPoint p = empty_point();
  p[0] = 0.7;
  EXPECT_NEAR(e.evaluate(p), 2 * 0.7 * std::exp(0.49), 1e-12);
  Expr w = ex("y^k").derivative(sym::y());
  p[1] = 1.3;
  p[Symbol::intern("k").index()] = 2.5;
  EXPECT_NEAR(w.evaluate(p), 2.5 * std::pow(1.3, 1.5), 1e-12);
  Expr r = ex("x^(1/2)").derivative(sym::x());
  p[0] = 4;
  EXPECT_NEAR(r.evaluate(p), 0.25, 1e-14);
}

TEST(Evaluate, Exact) {
  Assignment a{{sym::x(), 2}, {sym::z(), 4}};
  EXPECT_EQ(rf("x/z").evaluate(a), mpq_class(1, 2));
  Assignment b{{sym::x(), 1}, {sym::y(), 1}, {sym::z(), 1}};
  EXPECT_EQ(rf("x*y*z + x + y").evaluate(b), 3);
  Assignment c{{sym::x(), 1}, {sym::z(), 0}};
  EXPECT_THROW(rf("x/z").evaluate(c), DivisionByZero);
  EXPECT_THROW(rf("x/z").evaluate({{sym::x(), 1}}), MissingAssignment);
}

TEST(Evaluate, Numeric) {
  NumericPoint p = empty_point();
  p[0] = 1;
  p[2] = 0;
  EXPECT_THROW(ex("x/z").evaluate(p), DivisionByZero);
  p[0] = -1;
  p[2] = 1;
  EXPECT_THROW(ex("ln(x)").evaluate(p), DomainError);
  EvalStats st;
  p[0] = 0.5;
  p[1] = 0.25;
  EXPECT_NEAR(ex("ln(x - y) + 1/(x - y)").evaluate(p, &st), std::log(0.25) + 4, 1e-14);
  EXPECT_DOUBLE_EQ(st.min_abs_denominator, 0.25);
  EXPECT_DOUBLE_EQ(st.min_log_argument, 0.25);
  EXPECT_THROW(ex("x + y").evaluate(empty_point()), MissingAssignment);
}

TEST(Substitute, ComposesRationally) {
  std::map<Symbol, Expr> b{{sym::phi(), ex("x*z")}, {sym::psi(), ex("y*z")}};
  Expr r = ex("PHI*PSI").substitute(b);
  EXPECT_EQ(r.to_rational(), rf("x*y*z^2"));
  std::map<Symbol, Expr> id{{sym::x(), Expr(sym::x())}};
  EXPECT_EQ(ex("x^2 + ln(x)").substitute(id), ex("x^2 + ln(x)"));
  std::map<Symbol, Expr> b4{{sym::phi(), ex("x*y*z + x + y")}, {sym::psi(), ex("z")}};
  EXPECT_EQ(ex("PSI^2/(PHI*PSI + 1)").substitute(b4).to_rational(), rf("z^2/(x*y*z^2 + x*z + y*z + 1)"));
}

TEST(Substitute, NonRationalBinding) {
  std::map<Symbol, Expr> b{{sym::psi(), ex("ln(z)")}};
  Expr r = ex("PSI^2 + 1").substitute(b);
  NumericPoint p = empty_point();
  p[2] = 2.0;
  EXPECT_NEAR(r.evaluate(p), std::log(2.0) * std::log(2.0) + 1, 1e-14);
}

TEST(Gcd, Basics) {
  ZPoly x = ZPoly::variable(sym::x());
  ZPoly y = ZPoly::variable(sym::y());
  ZPoly z = ZPoly::variable(sym::z());
  ZPoly a = (x - y) * (x + y * z + ZPoly(3));
  ZPoly b = (x - y) * (x * x - z);
  EXPECT_EQ(gcd(a, b), with_positive_lc(x - y));
  EXPECT_EQ(gcd(a.scaled(6), b.scaled(4)), with_positive_lc((x - y).scaled(2)));
  EXPECT_EQ(gcd(x * y, x * z), x);
  EXPECT_EQ(gcd(ZPoly(), b), with_positive_lc(b));
  ZPoly c = (x * y - z).pow(3) * (x + ZPoly(1)).pow(2);
  ZPoly d = (x * y - z).pow(2) * (y + ZPoly(1));
  EXPECT_EQ(gcd(c, d), with_positive_lc((x * y - z).pow(2)));
}

TEST(Printer, RoundTrip) {
  for (const char* s : {"x", "-x", "x^2", "x - y", "(x + y)/(x - y)", "ln(x - y)/2 + x*y", "x^(1/2) - 3*exp(-x)",
                        "(x + y)*ln(z)", "-(1/2)*ln(x)", "y^k", "PHI*PSI^2", "2^x", "1/(x*y)"}) {
    Expr e = ex(s);
    EXPECT_EQ(ex(to_string(e)), e) << s << " -> " << to_string(e);
  }
}
