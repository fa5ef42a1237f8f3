#include "invdyn/metric_search/metric_search.hpp"

#include "invdyn/kernel/gcd.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

namespace invdyn {

namespace {

constexpr int kParams = 6;
using Vec6 = std::array<double, kParams>;

std::array<Symbol, kParams> parameter_symbols() {
  return {sym::g(1, 1), sym::g(1, 2), sym::g(1, 3), sym::g(2, 2), sym::g(2, 3), sym::g(3, 3)};
}

std::string monomial_name(const std::array<unsigned, 3>& e) {
  static const char* names[] = {"x", "y", "z"};
  std::string out;
  for (std::size_t i = 0; i < 3; ++i) {
    if (e[i] == 0)
      continue;
    if (!out.empty())
      out += "*";
    out += names[i];
    if (e[i] > 1)
      out += "^" + std::to_string(e[i]);
  }
  return out.empty() ? "1" : out;
}

// Splits p by its (x,y,z) monomials, removes the common parameter-only factor
// and drops duplicates.
std::vector<Condition> coefficient_conditions(const ZPoly& p, ZPoly* removed) {
  std::map<std::array<unsigned, 3>, std::vector<ZPoly::Term>> groups;
  for (const auto& t : p.terms()) {
    std::array<unsigned, 3> key{t.mono[0], t.mono[1], t.mono[2]};
    Monomial m = t.mono;
    for (std::size_t i = 0; i < 3; ++i)
      m.set(i, 0);
    groups[key].push_back({m, t.coeff});
  }
  std::vector<Condition> raw;
  ZPoly content;
  for (auto& [key, terms] : groups) {
    ZPoly q = ZPoly::from_terms(std::move(terms));
    content = content.is_zero() ? q : gcd(content, q);
    raw.push_back({q, monomial_name(key)});
  }
  content = primitive_part(content);
  if (removed)
    *removed = content;
  std::vector<Condition> out;
  for (auto& c : raw) {
    ZPoly q = primitive_part(*divide_exact(c.poly, content));
    if (q.is_constant())
      continue;
    bool seen = std::any_of(out.begin(), out.end(), [&](const Condition& o) { return o.poly == q; });
    if (!seen)
      out.push_back({q, c.monomial});
  }
  return out;
}

/// Double-precision copy of a condition over the six parameters, scaled to
/// unit largest coefficient.
struct Compiled {
  std::vector<double> coeff;
  std::vector<std::array<unsigned, kParams>> exps;

  explicit Compiled(const ZPoly& p) {
    auto params = parameter_symbols();
    double scale = 0;
    for (const auto& t : p.terms())
      scale = std::max(scale, std::abs(t.coeff.get_d()));
    for (const auto& t : p.terms()) {
      std::array<unsigned, kParams> e{};
      for (int k = 0; k < kParams; ++k)
        e[static_cast<std::size_t>(k)] = t.mono[params[static_cast<std::size_t>(k)].index()];
      coeff.push_back(t.coeff.get_d() / scale);
      exps.push_back(e);
    }
  }

  double value(const Vec6& g, Vec6* grad) const {
    double v = 0;
    if (grad)
      grad->fill(0);
    for (std::size_t t = 0; t < coeff.size(); ++t) {
      Vec6 pw;
      double prod = coeff[t];
      for (std::size_t k = 0; k < kParams; ++k) {
        pw[k] = std::pow(g[k], exps[t][k]);
        prod *= pw[k];
      }
      v += prod;
      if (!grad)
        continue;
      for (std::size_t k = 0; k < kParams; ++k) {
        if (exps[t][k] == 0)
          continue;
        double d = coeff[t] * exps[t][k] * std::pow(g[k], exps[t][k] - 1);
        for (std::size_t j = 0; j < kParams; ++j)
          if (j != k)
            d *= pw[j];
        (*grad)[k] += d;
      }
    }
    return v;
  }
};

std::vector<Compiled> compile(const std::vector<Condition>& cs) {
  std::vector<Compiled> out;
  for (const auto& c : cs)
    out.emplace_back(c.poly);
  return out;
}

double residual(const std::vector<Compiled>& cs, const Vec6& g) {
  double r = 0;
  for (const auto& c : cs) {
    double v = c.value(g, nullptr);
    r += v * v;
  }
  return r;
}

double det(const Vec6& e) {
  double a = e[0], b = e[1], c = e[2], d = e[3], f = e[4], h = e[5];
  return a * (d * h - f * f) - b * (b * h - f * c) + c * (b * f - d * c);
}

double norm(const Vec6& v) {
  double s = 0;
  for (double x : v)
    s += x * x;
  return std::sqrt(s);
}

Vec6 normalized(Vec6 v) {
  double n = norm(v);
  for (double& x : v)
    x /= n;
  return v;
}

// Solves a 6x6 system by Gaussian elimination with partial pivoting.
bool solve6(std::array<Vec6, kParams> a, Vec6 b, Vec6& x) {
  for (std::size_t col = 0; col < kParams; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < kParams; ++r)
      if (std::abs(a[r][col]) > std::abs(a[piv][col]))
        piv = r;
    if (std::abs(a[piv][col]) < 1e-300)
      return false;
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    for (std::size_t r = col + 1; r < kParams; ++r) {
      double f = a[r][col] / a[col][col];
      for (std::size_t k = col; k < kParams; ++k)
        a[r][k] -= f * a[col][k];
      b[r] -= f * b[col];
    }
  }
  for (std::size_t i = kParams; i-- > 0;) {
    double s = b[i];
    for (std::size_t k = i + 1; k < kParams; ++k)
      s -= a[i][k] * x[k];
    x[i] = s / a[i][i];
  }
  return true;
}

// Residuals: the conditions plus |g|^2 - 1.
double evaluate(const std::vector<Compiled>& cs, const Vec6& g, std::vector<double>& r, std::vector<Vec6>& J) {
  r.resize(cs.size() + 1);
  J.resize(cs.size() + 1);
  double cost = 0;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    r[i] = cs[i].value(g, &J[i]);
    cost += r[i] * r[i];
  }
  double n2 = 0;
  for (std::size_t k = 0; k < kParams; ++k) {
    n2 += g[k] * g[k];
    J.back()[k] = 2 * g[k];
  }
  r.back() = n2 - 1;
  return cost + r.back() * r.back();
}

Vec6 levenberg_marquardt(const std::vector<Compiled>& cs, Vec6 g, int max_iterations) {
  std::vector<double> r;
  std::vector<Vec6> J;
  double cost = evaluate(cs, g, r, J);
  double lambda = 1e-3;
  for (int it = 0; it < max_iterations && cost > 1e-32; ++it) {
    std::array<Vec6, kParams> A{};
    Vec6 b{};
    for (std::size_t i = 0; i < r.size(); ++i)
      for (std::size_t k = 0; k < kParams; ++k) {
        b[k] -= J[i][k] * r[i];
        for (std::size_t j = 0; j < kParams; ++j)
          A[k][j] += J[i][k] * J[i][j];
      }
    bool improved = false;
    for (int tries = 0; tries < 30 && !improved; ++tries) {
      std::array<Vec6, kParams> M = A;
      for (std::size_t k = 0; k < kParams; ++k)
        M[k][k] += lambda * (A[k][k] + 1e-12);
      Vec6 step{};
      if (solve6(M, b, step)) {
        Vec6 trial;
        for (std::size_t k = 0; k < kParams; ++k)
          trial[k] = g[k] + step[k];
        std::vector<double> r2;
        std::vector<Vec6> J2;
        double c2 = evaluate(cs, trial, r2, J2);
        if (c2 < cost) {
          g = trial;
          cost = c2;
          r = std::move(r2);
          J = std::move(J2);
          lambda = std::max(lambda / 3, 1e-15);
          improved = true;
          continue;
        }
      }
      lambda *= 4;
    }
    if (!improved)
      break;
  }
  return g;
}

// +g and -g describe the same problem: fix the sign of the largest entry.
Vec6 canonical_sign(Vec6 v) {
  std::size_t big = 0;
  for (std::size_t k = 1; k < kParams; ++k)
    if (std::abs(v[k]) > std::abs(v[big]) + 1e-12)
      big = k;
  if (v[big] < 0)
    for (double& x : v)
      x = -x;
  return v;
}

mpq_class continued_fraction(double x, long max_den) {
  mpz_class h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double r = x;
  for (int i = 0; i < 64; ++i) {
    double a = std::floor(r);
    mpz_class ai(a);
    mpz_class h2 = ai * h1 + h0;
    mpz_class k2 = ai * k1 + k0;
    if (k2 > max_den)
      break;
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
    double frac = r - a;
    if (frac < 1e-12)
      break;
    r = 1 / frac;
  }
  mpq_class q(h1, k1);
  q.canonicalize();
  return q;
}

bool vanishes(const ZPoly& p, const Assignment& at) { return RF(p).evaluate(at) == 0; }

} // namespace

ConditionSystem extract_case1_conditions(const CurveData& data) {
  Session s = Session::build(data, Metric::symbolic());
  if (s.straight_line)
    throw CaseMismatch("the data are straight lines for a generic metric");
  FrameDecomposition f = frame_decompose(lie_bracket(s.x, s.z1), {s.x, s.z1, s.z0}, {"X", "Z1", "Z0"});
  ConditionSystem out;
  out.conditions = coefficient_conditions(f.coefficients[2].num(), &out.removed_content);
  OneForm a0 = alpha0(s.metric, s.z0);
  out.dual_conditions = coefficient_conditions(d_wedge(a0, a0).num(), nullptr);
  return out;
}

double condition_residual(const std::vector<Condition>& conditions, const std::array<double, 6>& g) {
  return residual(compile(conditions), g);
}

std::vector<MetricCandidate> solve_numeric(const ConditionSystem& sys, const SearchOptions& opts) {
  std::vector<Compiled> cs = compile(sys.conditions);
  std::vector<Compiled> dual = compile(sys.dual_conditions);
  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> normal;
  std::vector<MetricCandidate> out;
  for (int i = 0; i < opts.restarts; ++i) {
    Vec6 start;
    for (double& v : start)
      v = normal(rng);
    Vec6 g = canonical_sign(normalized(levenberg_marquardt(cs, normalized(start), opts.max_iterations)));
    MetricCandidate m{g, residual(cs, g), residual(dual, g), det(g)};
    if (!(m.residual < opts.accept_residual) || !(std::abs(m.det) > opts.min_det))
      continue;
    auto near = std::find_if(out.begin(), out.end(), [&](const MetricCandidate& o) {
      Vec6 d;
      for (std::size_t k = 0; k < kParams; ++k)
        d[k] = o.entries[k] - g[k];
      return norm(d) < opts.cluster_distance;
    });
    if (near == out.end())
      out.push_back(m);
    else if (m.residual < near->residual)
      *near = m;
  }
  std::sort(out.begin(), out.end(), [](const MetricCandidate& a, const MetricCandidate& b) {
    if (a.residual != b.residual)
      return a.residual < b.residual;
    return a.entries < b.entries;
  });
  return out;
}

std::optional<std::array<mpq_class, 6>> rationalize(const MetricCandidate& m, const ConditionSystem& sys,
                                                    long max_den) {
  std::size_t big = 0;
  for (std::size_t k = 1; k < kParams; ++k)
    if (std::abs(m.entries[k]) > std::abs(m.entries[big]))
      big = k;
  std::array<mpq_class, 6> q;
  Assignment at;
  auto params = parameter_symbols();
  for (std::size_t k = 0; k < kParams; ++k) {
    q[k] = continued_fraction(m.entries[k] / m.entries[big], max_den);
    at[params[k]] = q[k];
  }
  for (const auto& c : sys.conditions)
    if (!vanishes(c.poly, at))
      return std::nullopt;
  return q;
}

Certification certify_candidate(const CurveData& data, const MetricCandidate& m, const ConditionSystem& sys) {
  Certification out;
  out.entries = rationalize(m, sys);
  if (!out.entries) {
    out.note = "rationalized entries do not satisfy the conditions exactly";
    return out;
  }
  std::array<RF, 6> e;
  for (std::size_t k = 0; k < kParams; ++k)
    e[k] = RF((*out.entries)[k]);
  try {
    ClassificationReport r = classify(data, Metric(e));
    out.label = r.label;
    out.certified = is_case1(r.label);
    if (!out.certified)
      out.note = std::string("exact classification gives ") + to_string(r.label);
  } catch (const Error& err) {
    out.note = err.what();
  }
  return out;
}

} // namespace invdyn
