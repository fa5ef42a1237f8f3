#include "invdyn/kernel/rational_function.hpp"

#include <array>
#include <bit>

namespace invdyn {

struct RationalFunction::Factors {
  struct Item {
    ZPoly p; // primitive, positive leading coefficient, not constant
    unsigned e;
  };
  mpz_class c{1};
  std::vector<Item> items;
};

namespace {

using Factors = RationalFunction::Factors;
using Item = Factors::Item;

ZPoly exact_quotient(const ZPoly& a, const ZPoly& b) {
  if (b.is_constant() && b.constant_value() == 1)
    return a;
  auto q = divide_exact(a, b);
  if (!q)
    throw Error("internal: inexact polynomial quotient");
  return std::move(*q);
}

bool is_one(const ZPoly& p) { return p.is_constant() && !p.is_zero() && p.constant_value() == 1; }

bool is_atom(const ZPoly& p) {
  if (p.size() != 1)
    return false;
  const auto& t = p.leading();
  if (t.mono.is_one())
    return sgn(t.coeff) > 0;
  return t.coeff == 1 && std::popcount(t.mono.support()) == 1;
}

mpz_class igcd(const mpz_class& a, const mpz_class& b) {
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

mpz_class ilcm(const mpz_class& a, const mpz_class& b) {
  mpz_class l;
  mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return l;
}

ZPoly divide_integer(const ZPoly& p, const mpz_class& c) { return c == 1 ? p : exact_quotient(p, ZPoly(c)); }

// Factor list with exponents for two operands at once.
struct Split {
  ZPoly p;
  std::array<unsigned, 2> e;
};

// Makes the entries pairwise coprime, preserving the products of p^e[k] for each k.
void refine(std::vector<Split>& fs) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < fs.size() && !changed; ++i)
      for (std::size_t j = i + 1; j < fs.size() && !changed; ++j) {
        if (fs[i].p == fs[j].p) {
          fs[i].e[0] += fs[j].e[0];
          fs[i].e[1] += fs[j].e[1];
          fs.erase(fs.begin() + static_cast<long>(j));
          changed = true;
          break;
        }
        if (provably_coprime(fs[i].p, fs[j].p))
          continue;
        ZPoly g = gcd(fs[i].p, fs[j].p);
        if (g.is_constant())
          continue;
        Split a{exact_quotient(fs[i].p, g), fs[i].e};
        Split b{exact_quotient(fs[j].p, g), fs[j].e};
        Split c{g, {fs[i].e[0] + fs[j].e[0], fs[i].e[1] + fs[j].e[1]}};
        fs.erase(fs.begin() + static_cast<long>(j));
        fs.erase(fs.begin() + static_cast<long>(i));
        for (auto* s : {&a, &b, &c})
          if (!s->p.is_constant())
            fs.push_back(std::move(*s));
        changed = true;
      }
  }
}

std::vector<Split> lift(const std::vector<Item>& items, std::size_t slot) {
  std::vector<Split> out;
  for (const auto& it : items) {
    Split s{it.p, {0, 0}};
    s.e[slot] = it.e;
    out.push_back(std::move(s));
  }
  return out;
}

void refine(std::vector<Item>& items) {
  std::vector<Split> fs = lift(items, 0);
  refine(fs);
  items.clear();
  for (auto& s : fs)
    if (s.e[0] > 0)
      items.push_back({std::move(s.p), s.e[0]});
}

// Removes from num and the denominator c * prod(items) every common factor.
void cancel(ZPoly& num, mpz_class& c, std::vector<Item>& items) {
  if (c != 1) {
    mpz_class g = igcd(integer_content(num), c);
    if (g != 1) {
      num = divide_integer(num, g);
      c /= g;
    }
  }
  std::size_t i = 0;
  while (i < items.size()) {
    Item& it = items[i];
    while (it.e > 0 && may_divide(num, it.p)) {
      auto q = divide_exact(num, it.p);
      if (!q)
        break;
      num = std::move(*q);
      --it.e;
    }
    if (it.e == 0) {
      items.erase(items.begin() + static_cast<long>(i));
      continue;
    }
    if (num.is_constant() || provably_coprime(num, it.p)) {
      ++i;
      continue;
    }
    ZPoly g = gcd(num, it.p);
    if (g.is_constant()) {
      ++i;
      continue;
    }
    ZPoly h = exact_quotient(it.p, g);
    unsigned e = it.e;
    if (h.is_constant())
      items.erase(items.begin() + static_cast<long>(i));
    else
      it.p = std::move(h);
    items.push_back({std::move(g), e});
    refine(items);
    i = 0;
  }
}

ZPoly expand(const mpz_class& c, const std::vector<Item>& items) {
  ZPoly out(c);
  for (const auto& it : items)
    out = out * it.p.pow(it.e);
  return out;
}

const std::vector<Item>& items_of(const std::shared_ptr<const Factors>& f) {
  static const std::vector<Item> none;
  return f ? f->items : none;
}

} // namespace

struct RationalFunctionOps {
  // num coprime to c * prod(items); c > 0.
  static RationalFunction make(ZPoly num, mpz_class c, std::vector<Item> items) {
    RationalFunction r;
    if (num.is_zero())
      return r;
    r.den_ = expand(c, items);
    r.num_ = std::move(num);
    if (!items.empty()) {
      auto f = std::make_shared<Factors>();
      f->c = std::move(c);
      f->items = std::move(items);
      r.factors_ = std::move(f);
    }
    return r;
  }

  static mpz_class content(const RationalFunction& r) {
    return r.factors_ ? r.factors_->c : r.den_.constant_value();
  }

  // Denominator given as a single polynomial; full reduction.
  static RationalFunction reduce(ZPoly num, ZPoly den) {
    if (den.is_zero())
      throw DivisionByZero("rational function with zero denominator");
    if (num.is_zero())
      return {};
    if (sgn(den.leading().coeff) < 0) {
      num = -num;
      den = -den;
    }
    mpz_class c = integer_content(den);
    ZPoly p = divide_integer(den, c);
    std::vector<Item> items;
    if (!p.is_constant())
      items.push_back({std::move(p), 1});
    cancel(num, c, items);
    return make(std::move(num), std::move(c), std::move(items));
  }

  static RationalFunction negate(const RationalFunction& a) {
    RationalFunction r = a;
    r.num_ = -r.num_;
    return r;
  }

  static RationalFunction add(const RationalFunction& a, const RationalFunction& b) {
    if (a.is_zero())
      return b;
    if (b.is_zero())
      return a;
    mpz_class ca = content(a);
    mpz_class cb = content(b);
    if (!a.factors_ && !b.factors_) {
      mpz_class l = ilcm(ca, cb);
      ZPoly n = a.num_.scaled(mpz_class(l / ca)) + b.num_.scaled(mpz_class(l / cb));
      std::vector<Item> none;
      cancel(n, l, none);
      return make(std::move(n), std::move(l), {});
    }
    if (a.den_ == b.den_) {
      ZPoly n = a.num_ + b.num_;
      mpz_class c = ca;
      std::vector<Item> items = items_of(a.factors_);
      cancel(n, c, items);
      return make(std::move(n), std::move(c), std::move(items));
    }
    std::vector<Split> fs = lift(items_of(a.factors_), 0);
    for (auto& s : lift(items_of(b.factors_), 1))
      fs.push_back(std::move(s));
    refine(fs);
    mpz_class c = ilcm(ca, cb);
    ZPoly ma(mpz_class(c / ca));
    ZPoly mb(mpz_class(c / cb));
    std::vector<Item> items;
    for (const auto& s : fs) {
      unsigned m = std::max(s.e[0], s.e[1]);
      if (m > s.e[0])
        ma = ma * s.p.pow(m - s.e[0]);
      if (m > s.e[1])
        mb = mb * s.p.pow(m - s.e[1]);
      items.push_back({s.p, m});
    }
    ZPoly n = a.num_ * ma + b.num_ * mb;
    if (n.is_zero())
      return {};
    cancel(n, c, items);
    return make(std::move(n), std::move(c), std::move(items));
  }

  static RationalFunction mul(const RationalFunction& a, const RationalFunction& b) {
    if (a.is_zero() || b.is_zero())
      return {};
    ZPoly na = a.num_;
    ZPoly nb = b.num_;
    mpz_class ca = content(a);
    mpz_class cb = content(b);
    std::vector<Item> fa = items_of(a.factors_);
    std::vector<Item> fb = items_of(b.factors_);
    cancel(na, cb, fb);
    cancel(nb, ca, fa);
    std::vector<Split> fs = lift(fa, 0);
    for (auto& s : lift(fb, 0))
      fs.push_back(std::move(s));
    if (!fa.empty() && !fb.empty())
      refine(fs);
    std::vector<Item> items;
    for (auto& s : fs)
      items.push_back({std::move(s.p), s.e[0]});
    return make(na * nb, ca * cb, std::move(items));
  }

  static RationalFunction inverse(const RationalFunction& a) {
    if (a.is_zero())
      throw DivisionByZero("inverse of zero rational function");
    ZPoly num = a.den_;
    ZPoly den = a.num_;
    if (sgn(den.leading().coeff) < 0) {
      num = -num;
      den = -den;
    }
    mpz_class c = integer_content(den);
    ZPoly p = divide_integer(den, c);
    std::vector<Item> items;
    if (!p.is_constant())
      items.push_back({std::move(p), 1});
    return make(std::move(num), std::move(c), std::move(items));
  }

  static RationalFunction pow(const RationalFunction& a, unsigned n) {
    if (n == 0)
      return RationalFunction(1);
    std::vector<Item> items = items_of(a.factors_);
    for (auto& it : items)
      it.e *= n;
    mpz_class c;
    mpz_pow_ui(c.get_mpz_t(), content(a).get_mpz_t(), n);
    return make(a.num_.pow(n), std::move(c), std::move(items));
  }

  static RationalFunction derivative(const RationalFunction& a, std::size_t v) {
    mpz_class c = content(a);
    if (!a.factors_) {
      ZPoly n = a.num_.derivative(v);
      std::vector<Item> none;
      cancel(n, c, none);
      return make(std::move(n), std::move(c), {});
    }
    // d(n / (c prod f^e)) = (n' P - n sum e f' P/f) / (c prod f^e P), P = prod of the f depending on v.
    std::vector<Item> items = a.factors_->items;
    ZPoly P(1);
    for (const auto& it : items)
      if (it.p.degree_in(v) > 0)
        P = P * it.p;
    ZPoly sum;
    for (auto& it : items) {
      if (it.p.degree_in(v) == 0)
        continue;
      sum = sum + it.p.derivative(v).scaled(mpz_class(it.e)) * exact_quotient(P, it.p);
      ++it.e;
    }
    ZPoly n = a.num_.derivative(v) * P - a.num_ * sum;
    if (n.is_zero())
      return {};
    cancel(n, c, items);
    return make(std::move(n), std::move(c), std::move(items));
  }
};

RationalFunction::RationalFunction(const mpq_class& c) : num_(c.get_num()), den_(c.get_den()) {}

RationalFunction::RationalFunction(const QPoly& p) {
  auto [num, den] = clear_denominators(p);
  *this = fraction(num, ZPoly(den));
}

RationalFunction RationalFunction::variable(Symbol s) { return RationalFunction(ZPoly::variable(s)); }

RationalFunction RationalFunction::fraction(const ZPoly& num, const ZPoly& den) {
  return RationalFunctionOps::reduce(num, den);
}

mpq_class RationalFunction::constant_value() const {
  if (!is_constant())
    throw Error("rational function is not constant");
  mpq_class q(num_.constant_value(), den_.constant_value());
  q.canonicalize();
  return q;
}

RationalFunction RationalFunction::operator-() const { return RationalFunctionOps::negate(*this); }

RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
  return RationalFunctionOps::add(a, b);
}

RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) { return a + (-b); }

RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
  return RationalFunctionOps::mul(a, b);
}

RationalFunction RationalFunction::inverse() const { return RationalFunctionOps::inverse(*this); }

RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) { return a * b.inverse(); }

RationalFunction RationalFunction::pow(long n) const {
  if (n < 0)
    return inverse().pow(-n);
  return RationalFunctionOps::pow(*this, static_cast<unsigned>(n));
}

RationalFunction RationalFunction::derivative(Symbol s) const {
  if (!s.differentiable())
    throw DifferentiationError("cannot differentiate with respect to constant '" + s.name() + "'");
  if (!depends_on(s))
    return {};
  return RationalFunctionOps::derivative(*this, s.index());
}

template <class T>
T evaluate_poly(const ZPoly& p, std::span<const T> values) {
  T sum = 0;
  for (const auto& t : p.terms()) {
    T term;
    if constexpr (std::is_same_v<T, double>)
      term = t.coeff.get_d();
    else
      term = T(t.coeff);
    for (std::size_t i = 0; i < kMaxSymbols; ++i) {
      unsigned e = t.mono[i];
      for (unsigned k = 0; k < e; ++k)
        term *= values[i];
    }
    sum += term;
  }
  return sum;
}

template mpq_class evaluate_poly(const ZPoly&, std::span<const mpq_class>);
template double evaluate_poly(const ZPoly&, std::span<const double>);

mpq_class RationalFunction::evaluate(const Assignment& point) const {
  std::array<mpq_class, kMaxSymbols> values;
  std::uint32_t have = 0;
  for (const auto& [s, v] : point) {
    values[s.index()] = v;
    have |= 1u << s.index();
  }
  std::uint32_t need = support();
  if (need & ~have) {
    for (std::size_t i = 0; i < kMaxSymbols; ++i)
      if ((need & ~have) & (1u << i))
        throw MissingAssignment("no value for symbol '" + Symbol::from_index(i).name() + "'");
  }
  std::span<const mpq_class> view(values);
  mpq_class d = evaluate_poly(den_, view);
  if (d == 0)
    throw DivisionByZero("denominator vanishes at the evaluation point");
  mpq_class r = evaluate_poly(num_, view) / d;
  r.canonicalize();
  return r;
}

RationalFunction RationalFunction::partial_evaluate(const Assignment& values) const {
  QPoly n = to_rational_poly(num_);
  QPoly d = to_rational_poly(den_);
  for (const auto& [s, v] : values) {
    if (!depends_on(s))
      continue;
    n = n.evaluate_at(s.index(), v);
    d = d.evaluate_at(s.index(), v);
  }
  if (d.is_zero())
    throw DivisionByZero("denominator vanishes under the substitution");
  return RationalFunction(n) / RationalFunction(d);
}

namespace {

RationalFunction compose_poly(const ZPoly& p, const std::map<Symbol, RationalFunction>& bindings) {
  std::array<std::vector<RationalFunction>, kMaxSymbols> powers;
  std::array<const RationalFunction*, kMaxSymbols> bound{};
  for (const auto& [s, f] : bindings)
    bound[s.index()] = &f;
  RationalFunction sum;
  for (const auto& t : p.terms()) {
    Monomial rest = t.mono;
    RationalFunction factor(1);
    for (std::size_t i = 0; i < kMaxSymbols; ++i) {
      unsigned e = t.mono[i];
      if (!e || !bound[i])
        continue;
      auto& pw = powers[i];
      if (pw.empty())
        pw.push_back(RationalFunction(1));
      while (pw.size() <= e)
        pw.push_back(pw.back() * *bound[i]);
      factor *= pw[e];
      rest = rest.without(i);
    }
    sum += factor * RationalFunction(ZPoly::monomial(rest, t.coeff));
  }
  return sum;
}

} // namespace

RationalFunction RationalFunction::compose(const std::map<Symbol, RationalFunction>& bindings) const {
  std::map<Symbol, RationalFunction> used;
  for (const auto& [s, f] : bindings)
    if (depends_on(s))
      used.emplace(s, f);
  if (used.empty())
    return *this;
  RationalFunction d = compose_poly(den_, used);
  if (d.is_zero())
    throw DivisionByZero("denominator vanishes under the substitution");
  return compose_poly(num_, used) / d;
}

std::string to_string(const RationalFunction& f) {
  if (is_one(f.den()))
    return to_string(f.num());
  std::string n = to_string(f.num());
  std::string d = to_string(f.den());
  if (f.num().size() > 1 || sgn(f.num().leading().coeff) < 0)
    n = "(" + n + ")";
  if (!is_atom(f.den()))
    d = "(" + d + ")";
  return n + "/" + d;
}

} // namespace invdyn
