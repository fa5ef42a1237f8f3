#include "invdyn/kernel/expr.hpp"

#include <bit>
#include <cmath>

namespace invdyn {

namespace {

/// Floating-point copy of an integer polynomial for fast evaluation.
struct DoublePoly {
  std::vector<long double> coeff;
  std::vector<std::uint32_t> offsets{0};
  std::vector<std::pair<std::uint8_t, std::uint8_t>> factors;

  DoublePoly() = default;
  explicit DoublePoly(const ZPoly& p) {
    for (const auto& t : p.terms()) {
      coeff.push_back(static_cast<long double>(t.coeff.get_d()));
      for (std::size_t i = 0; i < kMaxSymbols; ++i)
        if (t.mono[i])
          factors.emplace_back(static_cast<std::uint8_t>(i), static_cast<std::uint8_t>(t.mono[i]));
      offsets.push_back(static_cast<std::uint32_t>(factors.size()));
    }
  }

  long double operator()(const NumericPoint& x) const {
    long double sum = 0;
    for (std::size_t k = 0; k < coeff.size(); ++k) {
      long double term = coeff[k];
      for (auto f = offsets[k]; f < offsets[k + 1]; ++f) {
        long double v = x[factors[f].first];
        for (unsigned e = factors[f].second; e > 0; --e)
          term *= v;
      }
      sum += term;
    }
    return sum;
  }
};

bool is_integer(const mpq_class& q) { return q.get_den() == 1; }

} // namespace

struct Expr::Node {
  Kind kind = Kind::constant;
  mpq_class value;
  Symbol sym;
  RationalFunction rf;
  std::vector<Expr> args;
  std::uint32_t support = 0;
  DoublePoly num;
  DoublePoly den;
  bool unit_den = true;
};

NumericPoint empty_point() {
  NumericPoint p;
  p.fill(std::numeric_limits<double>::quiet_NaN());
  return p;
}

namespace {

std::shared_ptr<Expr::Node> make_node(Expr::Kind kind, std::vector<Expr> args) {
  auto n = std::make_shared<Expr::Node>();
  n->kind = kind;
  for (const auto& a : args)
    n->support |= a.support();
  n->args = std::move(args);
  return n;
}

bool is_rational_leaf(const Expr& e) {
  auto k = e.kind();
  return k == Expr::Kind::constant || k == Expr::Kind::symbol || k == Expr::Kind::rational;
}

RationalFunction leaf_rf(const Expr& e) {
  switch (e.kind()) {
  case Expr::Kind::constant: return RationalFunction(e.value());
  case Expr::Kind::symbol: return RationalFunction::variable(e.symbol());
  default: return e.rational();
  }
}

} // namespace

Expr::Expr() : Expr(mpq_class(0)) {}

Expr::Expr(long c) : Expr(mpq_class(c)) {}

Expr::Expr(const mpq_class& c) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::constant;
  n->value = c;
  n->value.canonicalize();
  node_ = std::move(n);
}

Expr::Expr(Symbol s) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::symbol;
  n->sym = s;
  n->support = 1u << s.index();
  node_ = std::move(n);
}

Expr::Expr(const RationalFunction& f) {
  if (f.is_constant()) {
    *this = Expr(f.constant_value());
    return;
  }
  if (f.is_polynomial() && f.num().is_monomial() && f.den().constant_value() == 1) {
    const auto& t = f.num().leading();
    if (t.coeff == 1 && t.mono.degree() == 1) {
      for (std::size_t i = 0; i < kMaxSymbols; ++i)
        if (t.mono[i]) {
          *this = Expr(Symbol::from_index(i));
          return;
        }
    }
  }
  auto n = std::make_shared<Node>();
  n->kind = Kind::rational;
  n->rf = f;
  n->support = f.support();
  n->num = DoublePoly(f.num());
  n->den = DoublePoly(f.den());
  n->unit_den = f.is_polynomial() && f.den().constant_value() == 1;
  node_ = std::move(n);
}

Expr::Kind Expr::kind() const noexcept { return node_->kind; }

const mpq_class& Expr::value() const {
  if (node_->kind != Kind::constant)
    throw Error("expression is not a constant");
  return node_->value;
}

Symbol Expr::symbol() const {
  if (node_->kind != Kind::symbol)
    throw Error("expression is not a symbol");
  return node_->sym;
}

const RationalFunction& Expr::rational() const {
  if (node_->kind != Kind::rational)
    throw Error("expression is not a rational node");
  return node_->rf;
}

const std::vector<Expr>& Expr::args() const { return node_->args; }

bool Expr::is_zero() const { return node_->kind == Kind::constant && node_->value == 0; }

bool Expr::is_constant_value(long c) const { return node_->kind == Kind::constant && node_->value == c; }

std::uint32_t Expr::support() const { return node_->support; }

Expr Expr::raw_sum(std::vector<Expr> terms) { return Expr(make_node(Kind::sum, std::move(terms))); }
Expr Expr::raw_product(std::vector<Expr> factors) { return Expr(make_node(Kind::product, std::move(factors))); }
Expr Expr::raw_power(const Expr& base, const Expr& exponent) { return Expr(make_node(Kind::power, {base, exponent})); }
Expr Expr::raw_log(const Expr& arg) { return Expr(make_node(Kind::log, {arg})); }
Expr Expr::raw_exp(const Expr& arg) { return Expr(make_node(Kind::exp, {arg})); }

Expr Expr::add(std::vector<Expr> terms) {
  RationalFunction acc;
  std::vector<Expr> rest;
  auto take = [&](const Expr& t) {
    if (is_rational_leaf(t))
      acc += leaf_rf(t);
    else
      rest.push_back(t);
  };
  for (const auto& t : terms) {
    if (t.kind() == Kind::sum)
      for (const auto& u : t.args())
        take(u);
    else
      take(t);
  }
  if (rest.empty())
    return Expr(acc);
  if (!acc.is_zero())
    rest.insert(rest.begin(), Expr(acc));
  if (rest.size() == 1)
    return rest.front();
  return raw_sum(std::move(rest));
}

Expr Expr::mul(std::vector<Expr> factors) {
  RationalFunction acc(1);
  std::vector<Expr> rest;
  auto take = [&](const Expr& t) {
    if (is_rational_leaf(t))
      acc *= leaf_rf(t);
    else
      rest.push_back(t);
  };
  for (const auto& f : factors) {
    if (f.kind() == Kind::product)
      for (const auto& u : f.args())
        take(u);
    else
      take(f);
  }
  if (acc.is_zero() || rest.empty())
    return Expr(acc);
  if (acc != RationalFunction(1))
    rest.insert(rest.begin(), Expr(acc));
  if (rest.size() == 1)
    return rest.front();
  return raw_product(std::move(rest));
}

Expr Expr::pow(const Expr& base, const Expr& exponent) {
  if (exponent.kind() == Kind::constant) {
    const mpq_class& c = exponent.value();
    if (c == 0)
      return Expr(1);
    if (c == 1)
      return base;
    if (is_integer(c) && is_rational_leaf(base)) {
      RationalFunction b = leaf_rf(base);
      if (b.is_zero() && c < 0)
        throw DivisionByZero("zero raised to a negative power");
      return Expr(b.pow(c.get_num().get_si()));
    }
  }
  if (base.is_constant_value(1))
    return Expr(1);
  return raw_power(base, exponent);
}

Expr Expr::log(const Expr& arg) {
  if (arg.is_constant_value(1))
    return Expr(0);
  return raw_log(arg);
}

Expr Expr::exp(const Expr& arg) {
  if (arg.is_zero())
    return Expr(1);
  return raw_exp(arg);
}

std::optional<RationalFunction> Expr::as_rational() const {
  switch (kind()) {
  case Kind::constant:
  case Kind::symbol:
  case Kind::rational: return leaf_rf(*this);
  case Kind::sum: {
    RationalFunction acc;
    for (const auto& a : args()) {
      auto r = a.as_rational();
      if (!r)
        return std::nullopt;
      acc += *r;
    }
    return acc;
  }
  case Kind::product: {
    RationalFunction acc(1);
    for (const auto& a : args()) {
      auto r = a.as_rational();
      if (!r)
        return std::nullopt;
      acc *= *r;
    }
    return acc;
  }
  case Kind::power: {
    auto e = args()[1].as_rational();
    if (!e || !e->is_constant() || !is_integer(e->constant_value()))
      return std::nullopt;
    auto b = args()[0].as_rational();
    if (!b)
      return std::nullopt;
    long n = e->constant_value().get_num().get_si();
    if (b->is_zero() && n < 0)
      throw DivisionByZero("zero raised to a negative power");
    return b->pow(n);
  }
  case Kind::log:
  case Kind::exp: return std::nullopt;
  }
  return std::nullopt;
}

RationalFunction Expr::to_rational() const {
  auto r = as_rational();
  if (!r)
    throw NonRationalError("expression '" + to_string(*this) + "' is not a rational function");
  return *r;
}

Expr Expr::canonical() const {
  switch (kind()) {
  case Kind::constant:
  case Kind::symbol: return *this;
  case Kind::rational: return Expr(rational());
  case Kind::sum:
  case Kind::product: {
    std::vector<Expr> parts;
    parts.reserve(args().size());
    for (const auto& a : args())
      parts.push_back(a.canonical());
    return kind() == Kind::sum ? add(std::move(parts)) : mul(std::move(parts));
  }
  case Kind::power: return pow(args()[0].canonical(), args()[1].canonical());
  case Kind::log: return log(args()[0].canonical());
  case Kind::exp: return exp(args()[0].canonical());
  }
  return *this;
}

Expr Expr::derivative(Symbol s) const {
  if (!s.differentiable())
    throw DifferentiationError("cannot differentiate with respect to constant '" + s.name() + "'");
  if (!depends_on(s))
    return Expr(0);
  switch (kind()) {
  case Kind::constant: return Expr(0);
  case Kind::symbol: return Expr(symbol() == s ? 1 : 0);
  case Kind::rational: return Expr(rational().derivative(s));
  case Kind::sum: {
    std::vector<Expr> parts;
    for (const auto& a : args())
      parts.push_back(a.derivative(s));
    return add(std::move(parts));
  }
  case Kind::product: {
    std::vector<Expr> parts;
    const auto& fs = args();
    for (std::size_t i = 0; i < fs.size(); ++i) {
      Expr d = fs[i].derivative(s);
      if (d.is_zero())
        continue;
      std::vector<Expr> factors;
      for (std::size_t j = 0; j < fs.size(); ++j)
        factors.push_back(j == i ? d : fs[j]);
      parts.push_back(mul(std::move(factors)));
    }
    return add(std::move(parts));
  }
  case Kind::power: {
    const Expr& b = args()[0];
    const Expr& e = args()[1];
    Expr db = b.derivative(s);
    if (!e.depends_on(s))
      return mul({e, pow(b, add({e, Expr(-1)})), db});
    // d(b^e) = b^e (e' ln b + e b'/b)
    Expr de = e.derivative(s);
    return mul({*this, add({mul({de, log(b)}), mul({e, db, pow(b, Expr(-1))})})});
  }
  case Kind::log: {
    const Expr& a = args()[0];
    return mul({a.derivative(s), pow(a, Expr(-1))});
  }
  case Kind::exp: return mul({*this, args()[0].derivative(s)});
  }
  return Expr(0);
}

namespace {

Expr poly_with(const ZPoly& p, const std::map<Symbol, Expr>& bindings) {
  std::vector<Expr> terms;
  for (const auto& t : p.terms()) {
    std::vector<Expr> factors{Expr(mpq_class(t.coeff))};
    for (std::size_t i = 0; i < kMaxSymbols; ++i) {
      unsigned e = t.mono[i];
      if (!e)
        continue;
      Symbol s = Symbol::from_index(i);
      auto it = bindings.find(s);
      Expr base = it == bindings.end() ? Expr(s) : it->second;
      factors.push_back(Expr::pow(base, Expr(static_cast<long>(e))));
    }
    terms.push_back(Expr::mul(std::move(factors)));
  }
  return Expr::add(std::move(terms));
}

} // namespace

Expr Expr::substitute(const std::map<Symbol, Expr>& bindings) const {
  std::map<Symbol, Expr> used;
  for (const auto& [s, e] : bindings)
    if (depends_on(s))
      used.emplace(s, e);
  if (used.empty())
    return canonical();
  if (auto self = as_rational()) {
    std::map<Symbol, RationalFunction> rb;
    bool all_rational = true;
    for (const auto& [s, e] : used) {
      auto r = e.as_rational();
      if (!r) {
        all_rational = false;
        break;
      }
      rb.emplace(s, *r);
    }
    if (all_rational)
      return Expr(self->compose(rb));
  }
  switch (kind()) {
  case Kind::constant: return *this;
  case Kind::symbol: return used.at(symbol()).canonical();
  case Kind::rational: {
    Expr n = poly_with(rational().num(), used);
    Expr d = poly_with(rational().den(), used);
    return mul({n, pow(d, Expr(-1))});
  }
  case Kind::sum:
  case Kind::product: {
    std::vector<Expr> parts;
    for (const auto& a : args())
      parts.push_back(a.substitute(used));
    return kind() == Kind::sum ? add(std::move(parts)) : mul(std::move(parts));
  }
  case Kind::power: return pow(args()[0].substitute(used), args()[1].substitute(used));
  case Kind::log: return log(args()[0].substitute(used));
  case Kind::exp: return exp(args()[0].substitute(used));
  }
  return *this;
}

double Expr::evaluate(const NumericPoint& point, EvalStats* stats) const {
  std::uint32_t need = support();
  for (std::size_t i = 0; i < kMaxSymbols; ++i)
    if (((need >> i) & 1u) && std::isnan(point[i]))
      throw MissingAssignment("no value for symbol '" + Symbol::from_index(i).name() + "'");
  EvalStats local;
  EvalStats& st = stats ? *stats : local;

  struct Eval {
    const NumericPoint& x;
    EvalStats& st;

    void denominator(long double d) {
      st.min_abs_denominator = std::min(st.min_abs_denominator, static_cast<double>(std::fabs(d)));
      if (d == 0)
        throw DivisionByZero("denominator vanishes at the evaluation point");
    }

    long double operator()(const Expr& e) {
      const Node& n = *e.node_;
      switch (n.kind) {
      case Kind::constant: return static_cast<long double>(n.value.get_d());
      case Kind::symbol: return x[n.sym.index()];
      case Kind::rational: {
        long double num = n.num(x);
        if (n.unit_den)
          return num;
        long double den = n.den(x);
        denominator(den);
        return num / den;
      }
      case Kind::sum: {
        long double s = 0;
        for (const auto& a : n.args)
          s += (*this)(a);
        return s;
      }
      case Kind::product: {
        long double p = 1;
        for (const auto& a : n.args)
          p *= (*this)(a);
        return p;
      }
      case Kind::power: {
        long double b = (*this)(n.args[0]);
        const Expr& ex = n.args[1];
        if (ex.kind() == Kind::constant && is_integer(ex.value())) {
          long k = ex.value().get_num().get_si();
          if (k < 0)
            denominator(b);
          return std::pow(b, static_cast<long double>(k));
        }
        long double p = (*this)(ex);
        if (b < 0)
          throw DomainError("non-integer power of a negative value");
        if (p < 0)
          denominator(b);
        return std::pow(b, p);
      }
      case Kind::log: {
        long double a = (*this)(n.args[0]);
        st.min_log_argument = std::min(st.min_log_argument, static_cast<double>(a));
        if (!(a > 0))
          throw DomainError("logarithm of a non-positive value");
        return std::log(a);
      }
      case Kind::exp: return std::exp((*this)(n.args[0]));
      }
      return 0;
    }
  };
  return static_cast<double>(Eval{point, st}(*this));
}

mpq_class Expr::evaluate_exact(const Assignment& point) const { return to_rational().evaluate(point); }

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_)
    return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  if (x.kind != y.kind || x.support != y.support)
    return false;
  switch (x.kind) {
  case Expr::Kind::constant: return x.value == y.value;
  case Expr::Kind::symbol: return x.sym == y.sym;
  case Expr::Kind::rational: return x.rf == y.rf;
  default: return x.args == y.args;
  }
}

namespace {

enum Level { kSum = 1, kProduct = 2, kUnary = 3, kPower = 4, kAtom = 5 };

struct Printed {
  std::string text;
  int level;
};

Printed print(const Expr& e);

std::string wrap(const Printed& p, int min_level) {
  return p.level >= min_level ? p.text : "(" + p.text + ")";
}

Printed print_rational(const RationalFunction& f) {
  std::string s = to_string(f);
  if (!f.is_polynomial())
    return {s, kProduct};
  const ZPoly& n = f.num();
  if (n.size() > 1)
    return {s, kSum};
  const auto& t = n.leading();
  if (sgn(t.coeff) < 0)
    return {s, kUnary};
  if (t.coeff != 1 || std::popcount(t.mono.support()) > 1)
    return {s, kProduct};
  return {s, t.mono.degree() > 1 ? kPower : kAtom};
}

Printed print(const Expr& e) {
  using Kind = Expr::Kind;
  switch (e.kind()) {
  case Kind::constant: {
    const mpq_class& v = e.value();
    if (!is_integer(v))
      return {v.get_str(), kProduct};
    return {v.get_str(), v < 0 ? kUnary : kAtom};
  }
  case Kind::symbol: return {e.symbol().name(), kAtom};
  case Kind::rational: return print_rational(e.rational());
  case Kind::sum: {
    std::string out;
    for (std::size_t i = 0; i < e.args().size(); ++i) {
      std::string s = wrap(print(e.args()[i]), kProduct);
      if (i == 0)
        out = s;
      else if (s.front() == '-')
        out += " - " + s.substr(1);
      else
        out += " + " + s;
    }
    return {out, kSum};
  }
  case Kind::product: {
    std::string out;
    for (std::size_t i = 0; i < e.args().size(); ++i) {
      Printed p = print(e.args()[i]);
      if (i == 0)
        out = wrap(p, kProduct);
      else
        out += "*" + wrap(p, kUnary);
    }
    return {out, kProduct};
  }
  case Kind::power: {
    Printed b = print(e.args()[0]);
    Printed x = print(e.args()[1]);
    std::string ex = x.level == kAtom ? x.text : "(" + x.text + ")";
    return {wrap(b, kAtom) + "^" + ex, kPower};
  }
  case Kind::log: return {"ln(" + print(e.args()[0]).text + ")", kAtom};
  case Kind::exp: return {"exp(" + print(e.args()[0]).text + ")", kAtom};
  }
  return {"?", kAtom};
}

} // namespace

std::string to_string(const Expr& e) { return print(e).text; }

} // namespace invdyn
