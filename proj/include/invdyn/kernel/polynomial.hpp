#pragma once

#include "invdyn/kernel/monomial.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <type_traits>
#include <unordered_map>
#include <utility>
#include <vector>

namespace invdyn {

/// Sparse multivariate polynomial. Terms are kept sorted by decreasing
/// graded-lex order with no zero coefficients, so structural equality is
/// mathematical equality.
template <class Coeff>
class Poly {
public:
  struct Term {
    Monomial mono;
    Coeff coeff;
    friend bool operator==(const Term&, const Term&) = default;
  };

  Poly() = default;
  explicit Poly(const Coeff& c) {
    if (sgn(c) != 0)
      terms_.push_back({Monomial{}, c});
  }
  explicit Poly(long c) : Poly(Coeff(c)) {}

  static Poly variable(Symbol s) { return monomial(Monomial::of(s), Coeff(1)); }

  static Poly monomial(const Monomial& m, const Coeff& c) {
    Poly p;
    if (sgn(c) != 0)
      p.terms_.push_back({m, c});
    return p;
  }

  static Poly from_terms(std::vector<Term> terms) {
    std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.mono > b.mono; });
    Poly p;
    for (auto& t : terms) {
      if (!p.terms_.empty() && p.terms_.back().mono == t.mono)
        p.terms_.back().coeff += t.coeff;
      else {
        if (!p.terms_.empty() && sgn(p.terms_.back().coeff) == 0)
          p.terms_.pop_back();
        p.terms_.push_back(std::move(t));
      }
    }
    if (!p.terms_.empty() && sgn(p.terms_.back().coeff) == 0)
      p.terms_.pop_back();
    return p;
  }

  /// Caller guarantees sortedness and non-zero coefficients.
  static Poly from_sorted_terms(std::vector<Term> terms) {
    Poly p;
    p.terms_ = std::move(terms);
    return p;
  }

  const std::vector<Term>& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool is_zero() const noexcept { return terms_.empty(); }
  bool is_constant() const noexcept { return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.is_one()); }
  bool is_monomial() const noexcept { return terms_.size() == 1; }
  const Term& leading() const { return terms_.front(); }

  Coeff constant_value() const {
    if (terms_.empty() || !terms_.back().mono.is_one())
      return Coeff(0);
    return terms_.back().coeff;
  }

  std::uint32_t support() const noexcept {
    std::uint32_t mask = 0;
    for (const auto& t : terms_)
      mask |= t.mono.support();
    return mask;
  }

  unsigned degree_in(std::size_t var) const noexcept {
    unsigned d = 0;
    for (const auto& t : terms_)
      d = std::max(d, t.mono[var]);
    return d;
  }

  unsigned total_degree() const noexcept { return terms_.empty() ? 0 : terms_.front().mono.degree(); }

  Monomial monomial_content() const noexcept {
    if (terms_.empty())
      return Monomial{};
    Monomial m = terms_.front().mono;
    for (const auto& t : terms_)
      m = Monomial::gcd(m, t.mono);
    return m;
  }

  Poly divide_monomial(const Monomial& m) const {
    Poly r;
    r.terms_.reserve(terms_.size());
    for (const auto& t : terms_)
      r.terms_.push_back({t.mono / m, t.coeff});
    return r; // division by a common monomial keeps the grlex order
  }

  Poly multiply_monomial(const Monomial& m, const Coeff& c) const {
    if (sgn(c) == 0)
      return {};
    Poly r;
    r.terms_.reserve(terms_.size());
    for (const auto& t : terms_)
      r.terms_.push_back({t.mono * m, t.coeff * c});
    return r;
  }

  Poly operator-() const {
    Poly r = *this;
    for (auto& t : r.terms_)
      t.coeff = -t.coeff;
    return r;
  }

  friend Poly operator+(const Poly& a, const Poly& b) { return merge(a, b, false); }
  friend Poly operator-(const Poly& a, const Poly& b) { return merge(a, b, true); }
  Poly& operator+=(const Poly& b) { return *this = merge(*this, b, false); }
  Poly& operator-=(const Poly& b) { return *this = merge(*this, b, true); }

  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero())
      return {};
    if (a.size() == 1)
      return b.multiply_monomial(a.terms_[0].mono, a.terms_[0].coeff);
    if (b.size() == 1)
      return a.multiply_monomial(b.terms_[0].mono, b.terms_[0].coeff);
    std::unordered_map<Monomial, Coeff, MonomialHash> acc;
    acc.reserve(a.size() * b.size());
    Coeff tmp;
    for (const auto& s : a.terms_)
      for (const auto& t : b.terms_) {
        tmp = s.coeff * t.coeff;
        auto [it, inserted] = acc.try_emplace(s.mono * t.mono, tmp);
        if (!inserted)
          it->second += tmp;
      }
    std::vector<Term> terms;
    terms.reserve(acc.size());
    for (auto& [m, c] : acc)
      if (sgn(c) != 0)
        terms.push_back({m, std::move(c)});
    std::sort(terms.begin(), terms.end(), [](const Term& x, const Term& y) { return x.mono > y.mono; });
    return from_sorted_terms(std::move(terms));
  }
  Poly& operator*=(const Poly& b) { return *this = *this * b; }

  Poly scaled(const Coeff& c) const {
    if (sgn(c) == 0)
      return {};
    Poly r = *this;
    for (auto& t : r.terms_)
      t.coeff *= c;
    return r;
  }

  Poly pow(unsigned n) const {
    Poly result(Coeff(1));
    Poly base = *this;
    while (n) {
      if (n & 1u)
        result = result * base;
      n >>= 1u;
      if (n)
        base = base * base;
    }
    return result;
  }

  Poly derivative(std::size_t var) const {
    std::vector<Term> terms;
    for (const auto& t : terms_) {
      unsigned e = t.mono[var];
      if (e == 0)
        continue;
      Monomial m = t.mono;
      m.set(var, e - 1);
      terms.push_back({m, t.coeff * static_cast<long>(e)});
    }
    // d/dvar may reorder terms under grlex (degrees drop unevenly).
    return from_terms(std::move(terms));
  }

  /// Substitute a coefficient-ring value for one variable.
  Poly evaluate_at(std::size_t var, const Coeff& value) const {
    std::vector<Term> terms;
    terms.reserve(terms_.size());
    for (const auto& t : terms_) {
      unsigned e = t.mono[var];
      if (e == 0) {
        terms.push_back(t);
        continue;
      }
      Coeff c = t.coeff;
      Coeff p;
      if constexpr (std::is_same_v<Coeff, mpz_class>) {
        mpz_pow_ui(p.get_mpz_t(), value.get_mpz_t(), e);
      } else {
        p = value;
        for (unsigned i = 1; i < e; ++i)
          p *= value;
      }
      c *= p;
      terms.push_back({t.mono.without(var), std::move(c)});
    }
    return from_terms(std::move(terms));
  }

  friend bool operator==(const Poly&, const Poly&) = default;

private:
  static Poly merge(const Poly& a, const Poly& b, bool subtract) {
    Poly r;
    r.terms_.reserve(a.size() + b.size());
    auto i = a.terms_.begin();
    auto j = b.terms_.begin();
    while (i != a.terms_.end() || j != b.terms_.end()) {
      if (j == b.terms_.end() || (i != a.terms_.end() && i->mono > j->mono)) {
        r.terms_.push_back(*i++);
      } else if (i == a.terms_.end() || j->mono > i->mono) {
        r.terms_.push_back({j->mono, subtract ? Coeff(-j->coeff) : j->coeff});
        ++j;
      } else {
        Coeff c = subtract ? Coeff(i->coeff - j->coeff) : Coeff(i->coeff + j->coeff);
        if (sgn(c) != 0)
          r.terms_.push_back({i->mono, std::move(c)});
        ++i;
        ++j;
      }
    }
    return r;
  }

  std::vector<Term> terms_;
};

using ZPoly = Poly<mpz_class>;
/// Polynomial with exact rational coefficients.
using QPoly = Poly<mpq_class>;

/// Exact quotient f / h, or nullopt when h does not divide f.
template <class Coeff>
std::optional<Poly<Coeff>> divide_exact(const Poly<Coeff>& f, const Poly<Coeff>& h) {
  using P = Poly<Coeff>;
  using Term = typename P::Term;
  if (h.is_zero())
    throw DivisionByZero("polynomial division by zero");
  if (f.is_zero())
    return P{};
  if (h.is_constant()) {
    const Coeff& c = h.leading().coeff;
    std::vector<Term> terms;
    terms.reserve(f.size());
    for (const auto& t : f.terms()) {
      if constexpr (std::is_same_v<Coeff, mpz_class>) {
        if (!mpz_divisible_p(t.coeff.get_mpz_t(), c.get_mpz_t()))
          return std::nullopt;
        mpz_class q;
        mpz_divexact(q.get_mpz_t(), t.coeff.get_mpz_t(), c.get_mpz_t());
        terms.push_back({t.mono, std::move(q)});
      } else {
        terms.push_back({t.mono, Coeff(t.coeff / c)});
      }
    }
    return P::from_sorted_terms(std::move(terms));
  }
  if ((h.support() & ~f.support()) != 0 || h.total_degree() > f.total_degree())
    return std::nullopt;
  const auto& lead = h.leading();
  std::map<Monomial, Coeff, std::greater<>> rem;
  for (const auto& t : f.terms())
    rem.emplace(t.mono, t.coeff);
  std::vector<Term> quotient;
  Coeff q, prod;
  while (!rem.empty()) {
    auto it = rem.begin();
    if (!lead.mono.divides(it->first))
      return std::nullopt;
    if constexpr (std::is_same_v<Coeff, mpz_class>) {
      if (!mpz_divisible_p(it->second.get_mpz_t(), lead.coeff.get_mpz_t()))
        return std::nullopt;
      mpz_divexact(q.get_mpz_t(), it->second.get_mpz_t(), lead.coeff.get_mpz_t());
    } else {
      q = it->second / lead.coeff;
    }
    Monomial qm = it->first / lead.mono;
    rem.erase(it);
    for (std::size_t k = 1; k < h.size(); ++k) {
      const auto& t = h.terms()[k];
      prod = q * t.coeff;
      auto [pos, inserted] = rem.try_emplace(qm * t.mono, -prod);
      if (!inserted) {
        pos->second -= prod;
        if (sgn(pos->second) == 0)
          rem.erase(pos);
      }
    }
    quotient.push_back({qm, q});
  }
  return P::from_terms(std::move(quotient));
}

/// gcd of the integer coefficients, non-negative.
inline mpz_class integer_content(const ZPoly& p) {
  mpz_class g = 0;
  for (const auto& t : p.terms()) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), t.coeff.get_mpz_t());
    if (g == 1)
      break;
  }
  return g;
}

inline QPoly to_rational_poly(const ZPoly& p) {
  std::vector<QPoly::Term> terms;
  terms.reserve(p.size());
  for (const auto& t : p.terms())
    terms.push_back({t.mono, mpq_class(t.coeff)});
  return QPoly::from_sorted_terms(std::move(terms));
}

/// Returns (P, d) with q == P / d, P integral and d > 0 minimal.
inline std::pair<ZPoly, mpz_class> clear_denominators(const QPoly& q) {
  mpz_class d = 1;
  for (const auto& t : q.terms())
    mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), t.coeff.get_den_mpz_t());
  std::vector<ZPoly::Term> terms;
  terms.reserve(q.size());
  for (const auto& t : q.terms()) {
    mpz_class c = d / t.coeff.get_den();
    c *= t.coeff.get_num();
    terms.push_back({t.mono, std::move(c)});
  }
  return {ZPoly::from_sorted_terms(std::move(terms)), d};
}

/// Human-readable form using the expression grammar ("2*x^2*y - z + 3").
template <class Coeff>
std::string to_string(const Poly<Coeff>& p);

extern template std::string to_string(const ZPoly&);
extern template std::string to_string(const QPoly&);

} // namespace invdyn
