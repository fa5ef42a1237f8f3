#include "invdyn/kernel/gcd.hpp"

#include <array>
#include <map>
#include <mutex>

// Brown's modular algorithm: images mod 62-bit primes, multivariate gcd mod p
// by evaluation/interpolation of the highest variable, CRT lifting, trial
// division over Z.

namespace invdyn {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

struct Zp {
  u64 p;

  u64 add(u64 a, u64 b) const {
    u64 s = a + b;
    return s >= p ? s - p : s;
  }
  u64 sub(u64 a, u64 b) const { return a >= b ? a - b : a + (p - b); }
  u64 mul(u64 a, u64 b) const { return static_cast<u64>(static_cast<u128>(a) * b % p); }
  u64 neg(u64 a) const { return a == 0 ? 0 : p - a; }
  u64 pow(u64 a, u64 e) const {
    u64 r = 1;
    while (e) {
      if (e & 1u)
        r = mul(r, a);
      a = mul(a, a);
      e >>= 1u;
    }
    return r;
  }
  u64 inv(u64 a) const { return pow(a, p - 2); }
  u64 reduce(const mpz_class& c) const { return mpz_fdiv_ui(c.get_mpz_t(), p); }
};

const std::vector<u64>& primes() {
  static const std::vector<u64> list = [] {
    std::vector<u64> out;
    mpz_class c = (mpz_class(1) << 62) - 1;
    while (out.size() < 256) {
      if (mpz_probab_prime_p(c.get_mpz_t(), 30) > 0)
        out.push_back(c.get_ui());
      c -= 2;
    }
    return out;
  }();
  return list;
}

// ---- dense univariate polynomials over Z_p, low degree first ----

using UPoly = std::vector<u64>;

void utrim(UPoly& a) {
  while (!a.empty() && a.back() == 0)
    a.pop_back();
}

long udeg(const UPoly& a) { return static_cast<long>(a.size()) - 1; }

u64 ueval(const Zp& F, const UPoly& a, u64 x) {
  u64 r = 0;
  for (auto it = a.rbegin(); it != a.rend(); ++it)
    r = F.add(F.mul(r, x), *it);
  return r;
}

UPoly umul(const Zp& F, const UPoly& a, const UPoly& b) {
  if (a.empty() || b.empty())
    return {};
  UPoly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      r[i + j] = F.add(r[i + j], F.mul(a[i], b[j]));
  utrim(r);
  return r;
}

UPoly umonic(const Zp& F, UPoly a) {
  if (a.empty())
    return a;
  u64 s = F.inv(a.back());
  for (auto& c : a)
    c = F.mul(c, s);
  return a;
}

// a = q*b + r
void udivrem(const Zp& F, UPoly a, const UPoly& b, UPoly* q, UPoly* r) {
  long db = udeg(b);
  u64 s = F.inv(b.back());
  UPoly quo;
  if (udeg(a) >= db)
    quo.assign(static_cast<std::size_t>(udeg(a) - db + 1), 0);
  while (!a.empty() && udeg(a) >= db) {
    long shift = udeg(a) - db;
    u64 c = F.mul(a.back(), s);
    quo[static_cast<std::size_t>(shift)] = c;
    for (long i = 0; i <= db; ++i) {
      auto k = static_cast<std::size_t>(i + shift);
      a[k] = F.sub(a[k], F.mul(c, b[static_cast<std::size_t>(i)]));
    }
    utrim(a);
  }
  if (q) {
    utrim(quo);
    *q = std::move(quo);
  }
  if (r)
    *r = std::move(a);
}

UPoly ugcd(const Zp& F, UPoly a, UPoly b) {
  while (!b.empty()) {
    UPoly r;
    udivrem(F, std::move(a), b, nullptr, &r);
    a = std::move(b);
    b = std::move(r);
  }
  return umonic(F, std::move(a));
}

// ---- sparse multivariate polynomials over Z_p, lex-descending terms ----

struct LexGreater {
  bool operator()(const Monomial& a, const Monomial& b) const { return Monomial::lex_compare(a, b) > 0; }
};

struct MTerm {
  Monomial m;
  u64 c;
};

using MPoly = std::vector<MTerm>;

MPoly mp_normalize(const Zp& F, std::vector<MTerm> terms) {
  std::sort(terms.begin(), terms.end(), [](const MTerm& a, const MTerm& b) { return LexGreater{}(a.m, b.m); });
  MPoly out;
  for (auto& t : terms) {
    if (!out.empty() && out.back().m == t.m)
      out.back().c = F.add(out.back().c, t.c);
    else {
      if (!out.empty() && out.back().c == 0)
        out.pop_back();
      out.push_back(t);
    }
  }
  if (!out.empty() && out.back().c == 0)
    out.pop_back();
  return out;
}

MPoly mp_reduce(const Zp& F, const ZPoly& a) {
  std::vector<MTerm> terms;
  terms.reserve(a.size());
  for (const auto& t : a.terms()) {
    u64 c = F.reduce(t.coeff);
    if (c)
      terms.push_back({t.mono, c});
  }
  return mp_normalize(F, std::move(terms));
}

bool mp_is_constant(const MPoly& a) { return a.empty() || (a.size() == 1 && a[0].m.is_one()); }

bool mp_contains(const MPoly& a, std::size_t v) {
  for (const auto& t : a)
    if (t.m[v])
      return true;
  return false;
}

unsigned mp_deg(const MPoly& a, std::size_t v) {
  unsigned d = 0;
  for (const auto& t : a)
    d = std::max(d, t.m[v]);
  return d;
}

MPoly mp_scale(const Zp& F, MPoly a, u64 s) {
  if (s == 0)
    return {};
  for (auto& t : a)
    t.c = F.mul(t.c, s);
  return a;
}

MPoly mp_monic(const Zp& F, MPoly a) {
  if (a.empty())
    return a;
  u64 s = F.inv(a.front().c);
  return mp_scale(F, std::move(a), s);
}

MPoly mp_merge(const Zp& F, const MPoly& a, const MPoly& b, bool subtract) {
  MPoly r;
  r.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  LexGreater gt;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && gt(a[i].m, b[j].m))) {
      r.push_back(a[i++]);
    } else if (i == a.size() || gt(b[j].m, a[i].m)) {
      r.push_back({b[j].m, subtract ? F.neg(b[j].c) : b[j].c});
      ++j;
    } else {
      u64 c = subtract ? F.sub(a[i].c, b[j].c) : F.add(a[i].c, b[j].c);
      if (c)
        r.push_back({a[i].m, c});
      ++i;
      ++j;
    }
  }
  return r;
}

MPoly mp_eval(const Zp& F, const MPoly& a, std::size_t v, u64 x) {
  std::vector<MTerm> terms;
  terms.reserve(a.size());
  for (const auto& t : a) {
    unsigned e = t.m[v];
    terms.push_back({t.m.without(v), e ? F.mul(t.c, F.pow(x, e)) : t.c});
  }
  return mp_normalize(F, std::move(terms));
}

using Groups = std::map<Monomial, UPoly, LexGreater>;

Groups mp_groups(const MPoly& a, std::size_t v) {
  Groups g;
  for (const auto& t : a) {
    auto& u = g[t.m.without(v)];
    unsigned e = t.m[v];
    if (u.size() <= e)
      u.resize(e + 1, 0);
    u[e] = t.c;
  }
  return g;
}

MPoly mp_from_groups(const Zp& F, const Groups& g, std::size_t v) {
  std::vector<MTerm> terms;
  for (const auto& [m, u] : g)
    for (std::size_t e = 0; e < u.size(); ++e)
      if (u[e]) {
        Monomial mm = m;
        mm.set(v, static_cast<unsigned>(e));
        terms.push_back({mm, u[e]});
      }
  return mp_normalize(F, std::move(terms));
}

UPoly mp_content(const Zp& F, const MPoly& a, std::size_t v) {
  UPoly c;
  for (const auto& [m, u] : mp_groups(a, v)) {
    c = ugcd(F, std::move(c), u);
    if (c.size() == 1)
      break;
  }
  return c;
}

UPoly mp_lc(const MPoly& a, std::size_t v) { return mp_groups(a, v).begin()->second; }

MPoly mp_div_u(const Zp& F, const MPoly& a, std::size_t v, const UPoly& d) {
  Groups g = mp_groups(a, v);
  for (auto& [m, u] : g) {
    utrim(u);
    UPoly q;
    udivrem(F, u, d, &q, nullptr);
    u = std::move(q);
  }
  return mp_from_groups(F, g, v);
}

MPoly mp_mul_u(const Zp& F, const MPoly& a, std::size_t v, const UPoly& d) {
  Groups g = mp_groups(a, v);
  for (auto& [m, u] : g)
    u = umul(F, u, d);
  return mp_from_groups(F, g, v);
}

MPoly mp_from_u(const UPoly& u, std::size_t v) {
  MPoly r;
  for (std::size_t e = u.size(); e-- > 0;)
    if (u[e]) {
      Monomial m;
      m.set(v, static_cast<unsigned>(e));
      r.push_back({m, u[e]});
    }
  return r;
}

UPoly mp_to_u(const MPoly& a, std::size_t v) {
  UPoly u(mp_deg(a, v) + 1, 0);
  for (const auto& t : a)
    u[t.m[v]] = t.c;
  utrim(u);
  return u;
}

// True iff b divides a in Z_p[vars].
bool mp_divides(const Zp& F, const MPoly& a, const MPoly& b) {
  if (a.empty())
    return true;
  std::map<Monomial, u64, LexGreater> rem;
  for (const auto& t : a)
    rem.emplace(t.m, t.c);
  const auto& lead = b.front();
  u64 s = F.inv(lead.c);
  while (!rem.empty()) {
    auto it = rem.begin();
    if (!lead.m.divides(it->first))
      return false;
    Monomial qm = it->first / lead.m;
    u64 q = F.mul(it->second, s);
    rem.erase(it);
    for (std::size_t k = 1; k < b.size(); ++k) {
      u64 prod = F.mul(q, b[k].c);
      auto [pos, inserted] = rem.try_emplace(qm * b[k].m, F.neg(prod));
      if (!inserted) {
        pos->second = F.sub(pos->second, prod);
        if (pos->second == 0)
          rem.erase(pos);
      }
    }
  }
  return true;
}

u64 random_residue(const Zp& F) {
  static thread_local std::uint64_t state = 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return (z ^ (z >> 31)) % (F.p - 2) + 2;
}

// Univariate image in v with every other variable replaced by point[w].
// The top coefficient is kept even when it vanishes so callers can detect it.
UPoly project(const Zp& F, const MPoly& f, std::size_t v, const std::array<u64, kMaxSymbols>& point) {
  UPoly u(mp_deg(f, v) + 1, 0);
  for (const auto& t : f) {
    u64 c = t.c;
    for (std::size_t w = 0; w < kMaxSymbols; ++w)
      if (w != v && t.m[w] != 0)
        c = F.mul(c, F.pow(point[w], t.m[w]));
    u[t.m[v]] = F.add(u[t.m[v]], c);
  }
  return u;
}

// Degree 0 images in every variable prove the gcd constant.
bool coprime_by_projection(const Zp& F, const MPoly& a, const MPoly& b, const std::vector<std::size_t>& vars) {
  std::array<u64, kMaxSymbols> point{};
  for (std::size_t v : vars)
    point[v] = random_residue(F);
  for (std::size_t v : vars) {
    UPoly ua = project(F, a, v, point);
    UPoly ub = project(F, b, v, point);
    if (ua.back() == 0 || ub.back() == 0)
      return false;
    if (ua.size() > 1 && ub.size() > 1 && udeg(ugcd(F, ua, ub)) > 0)
      return false;
  }
  return true;
}

// Monic (lex) gcd in Z_p[vars].
MPoly gcd_mod(const Zp& F, MPoly a, MPoly b, const std::vector<std::size_t>& vars) {
  if (a.empty())
    return mp_monic(F, std::move(b));
  if (b.empty())
    return mp_monic(F, std::move(a));
  if (mp_is_constant(a) || mp_is_constant(b) || vars.empty()) {
    Monomial one;
    return {{one, 1}};
  }
  if (vars.size() == 1) {
    std::size_t v = vars[0];
    return mp_from_u(ugcd(F, mp_to_u(a, v), mp_to_u(b, v)), v);
  }
  if (coprime_by_projection(F, a, b, vars)) {
    Monomial one;
    return {{one, 1}};
  }
  std::size_t v = vars.back();
  std::vector<std::size_t> rest(vars.begin(), vars.end() - 1);
  if (!mp_contains(a, v) && !mp_contains(b, v))
    return gcd_mod(F, std::move(a), std::move(b), rest);

  UPoly ca = mp_content(F, a, v);
  UPoly cb = mp_content(F, b, v);
  UPoly cont = ugcd(F, ca, cb);
  a = mp_div_u(F, a, v, ca);
  b = mp_div_u(F, b, v, cb);
  UPoly la = mp_lc(a, v);
  UPoly lb = mp_lc(b, v);
  UPoly gamma = ugcd(F, la, lb);
  std::size_t bound = std::min(mp_deg(a, v), mp_deg(b, v)) + static_cast<std::size_t>(udeg(gamma));

  MPoly G;
  Monomial glm;
  UPoly q{1};
  std::size_t points = 0;
  for (u64 alpha = 1; alpha < F.p; ++alpha) {
    if (ueval(F, la, alpha) == 0 || ueval(F, lb, alpha) == 0)
      continue;
    MPoly ga = gcd_mod(F, mp_eval(F, a, v, alpha), mp_eval(F, b, v, alpha), rest);
    if (mp_is_constant(ga))
      return mp_from_u(cont, v);
    Monomial lm = ga.front().m;
    ga = mp_scale(F, std::move(ga), ueval(F, gamma, alpha));
    bool stable = false;
    int order = points == 0 ? -1 : Monomial::lex_compare(lm, glm);
    if (order < 0) {
      G = std::move(ga);
      glm = lm;
      q = {F.neg(alpha), 1};
      points = 1;
    } else if (order > 0) {
      continue;
    } else {
      MPoly diff = mp_merge(F, ga, mp_eval(F, G, v, alpha), true);
      if (diff.empty())
        stable = true;
      else
        G = mp_merge(F, G, mp_mul_u(F, mp_scale(F, std::move(diff), F.inv(ueval(F, q, alpha))), v, q), false);
      q = umul(F, q, {F.neg(alpha), 1});
      ++points;
    }
    if (stable || points > bound) {
      MPoly H = mp_div_u(F, G, v, mp_content(F, G, v));
      if (mp_divides(F, a, H) && mp_divides(F, b, H))
        return mp_monic(F, mp_mul_u(F, H, v, cont));
      if (points > bound)
        points = 0;
    }
  }
  throw Error("modular gcd ran out of evaluation points");
}

const ZPoly::Term& lex_leading(const ZPoly& a) {
  const ZPoly::Term* best = &a.terms().front();
  for (const auto& t : a.terms())
    if (Monomial::lex_compare(t.mono, best->mono) > 0)
      best = &t;
  return *best;
}

ZPoly divide_integer(const ZPoly& a, const mpz_class& c) {
  if (c == 1)
    return a;
  return *divide_exact(a, ZPoly(c));
}

} // namespace

ZPoly with_positive_lc(ZPoly p) {
  if (!p.is_zero() && sgn(p.leading().coeff) < 0)
    return -p;
  return p;
}

ZPoly primitive_part(const ZPoly& p) {
  if (p.is_zero())
    return p;
  return with_positive_lc(divide_integer(p, integer_content(p)));
}

ZPoly gcd(const ZPoly& a, const ZPoly& b) {
  if (a.is_zero())
    return with_positive_lc(b);
  if (b.is_zero())
    return with_positive_lc(a);
  mpz_class ca = integer_content(a);
  mpz_class cb = integer_content(b);
  mpz_class cg;
  mpz_gcd(cg.get_mpz_t(), ca.get_mpz_t(), cb.get_mpz_t());
  if (a.is_constant() || b.is_constant())
    return ZPoly(cg);
  Monomial ma = a.monomial_content();
  Monomial mb = b.monomial_content();
  ZPoly unit = ZPoly::monomial(Monomial::gcd(ma, mb), cg);
  ZPoly a1 = with_positive_lc(divide_integer(a.divide_monomial(ma), ca));
  ZPoly b1 = with_positive_lc(divide_integer(b.divide_monomial(mb), cb));
  if (a1.is_constant() || b1.is_constant() || (a1.support() & b1.support()) == 0)
    return unit;
  if (a1 == b1)
    return unit * a1;
  {
    const ZPoly& small = a1.size() <= b1.size() ? a1 : b1;
    const ZPoly& large = a1.size() <= b1.size() ? b1 : a1;
    if (may_divide(large, small) && divide_exact(large, small))
      return unit * small;
  }

  std::vector<std::size_t> vars;
  std::uint32_t mask = a1.support() | b1.support();
  for (std::size_t i = 0; i < kMaxSymbols; ++i)
    if (mask & (1u << i))
      vars.push_back(i);

  const mpz_class& la = lex_leading(a1).coeff;
  const mpz_class& lb = lex_leading(b1).coeff;
  mpz_class gamma;
  mpz_gcd(gamma.get_mpz_t(), la.get_mpz_t(), lb.get_mpz_t());

  std::map<Monomial, mpz_class, LexGreater> acc;
  mpz_class modulus;
  Monomial glm;
  bool have = false;
  for (u64 p : primes()) {
    Zp F{p};
    if (F.reduce(la) == 0 || F.reduce(lb) == 0)
      continue;
    MPoly gp = gcd_mod(F, mp_reduce(F, a1), mp_reduce(F, b1), vars);
    if (mp_is_constant(gp))
      return unit;
    Monomial lm = gp.front().m;
    gp = mp_scale(F, std::move(gp), F.reduce(gamma));
    int order = have ? Monomial::lex_compare(lm, glm) : -1;
    bool changed = true;
    if (order < 0) {
      acc.clear();
      mpz_class half = p / 2;
      for (const auto& t : gp) {
        mpz_class c(static_cast<unsigned long>(t.c));
        if (c > half)
          c -= mpz_class(static_cast<unsigned long>(p));
        acc.emplace(t.m, std::move(c));
      }
      modulus = static_cast<unsigned long>(p);
      glm = lm;
      have = true;
    } else if (order > 0) {
      continue;
    } else {
      changed = false;
      std::map<Monomial, u64, LexGreater> image;
      for (const auto& t : gp)
        image.emplace(t.m, t.c);
      for (const auto& [m, c] : image)
        acc.try_emplace(m, 0);
      u64 minv = F.inv(F.reduce(modulus));
      mpz_class next = modulus * static_cast<unsigned long>(p);
      mpz_class half = next / 2;
      for (auto it = acc.begin(); it != acc.end();) {
        auto img = image.find(it->first);
        u64 u = img == image.end() ? 0 : img->second;
        u64 t = F.mul(F.sub(u, F.reduce(it->second)), minv);
        if (t != 0) {
          changed = true;
          it->second += modulus * static_cast<unsigned long>(t);
          if (it->second > half)
            it->second -= next;
        }
        if (it->second == 0)
          it = acc.erase(it);
        else
          ++it;
      }
      modulus = std::move(next);
    }
    if (!changed) {
      std::vector<ZPoly::Term> terms;
      for (const auto& [m, c] : acc)
        terms.push_back({m, c});
      ZPoly H = primitive_part(ZPoly::from_terms(std::move(terms)));
      if (divide_exact(a1, H) && divide_exact(b1, H))
        return unit * H;
    }
  }
  throw Error("modular gcd exhausted its prime table");
}

bool provably_coprime(const ZPoly& a, const ZPoly& b) {
  if (a.is_zero() || b.is_zero())
    return false;
  if (a.is_constant() || b.is_constant())
    return true;
  std::uint32_t mask = a.support() | b.support();
  std::vector<std::size_t> vars;
  for (std::size_t i = 0; i < kMaxSymbols; ++i)
    if (mask & (1u << i))
      vars.push_back(i);
  Zp F{primes()[1]};
  return coprime_by_projection(F, mp_reduce(F, a), mp_reduce(F, b), vars);
}

bool may_divide(const ZPoly& a, const ZPoly& b) {
  if (b.is_zero())
    return false;
  if (a.is_zero() || b.is_constant())
    return true;
  if ((b.support() & ~a.support()) != 0)
    return false;
  for (std::size_t i = 0; i < kMaxSymbols; ++i)
    if (((b.support() >> i) & 1u) && b.degree_in(i) > a.degree_in(i))
      return false;
  Zp F{primes()[2]};
  MPoly ma = mp_reduce(F, a);
  MPoly mb = mp_reduce(F, b);
  std::array<u64, kMaxSymbols> point{};
  for (std::size_t i = 0; i < kMaxSymbols; ++i)
    point[i] = random_residue(F);
  for (std::size_t v = 0; v < kMaxSymbols; ++v) {
    if (!((b.support() >> v) & 1u))
      continue;
    UPoly ub = project(F, mb, v, point);
    if (ub.empty() || ub.back() == 0 || udeg(ub) < 1)
      continue;
    UPoly r;
    udivrem(F, project(F, ma, v, point), ub, nullptr, &r);
    utrim(r);
    if (!r.empty())
      return false;
  }
  return true;
}

} // namespace invdyn
