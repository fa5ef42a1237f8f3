#include "invdyn/verifier/verifier.hpp"

#include "invdyn/classifier/classifier.hpp"

#include <cmath>
#include <algorithm>
#include <cstdio>
#include <map>
#include <random>

namespace invdyn {

namespace {

RF d(const RF& f, Symbol v) { return f.derivative(v); }
Expr d(const Expr& f, Symbol v) { return f.derivative(v); }
RF scale(const RF& k, const RF& f) { return k * f; }
Expr scale(const RF& k, const Expr& f) { return Expr(k) * f; }
Expr to_expr(const RF& f) { return Expr(f); }
Expr to_expr(const Expr& f) { return f; }

template <class T>
T sum(const std::vector<T>& terms) {
  T out{};
  for (const auto& t : terms)
    out = out + t;
  return out;
}

template <class T>
struct Equation {
  std::string name;
  std::vector<T> terms;
};

template <class T>
struct System {
  std::vector<Equation<T>> equations;
  std::optional<T> h2;
};

template <class T>
void add_motion(System<T>& sys, const Session& s, const T& V, const T& h2) {
  OneForm gz0 = lower_index(s.metric, s.z0);
  OneForm gdz = lower_index(s.metric, s.dz);
  T z0h2 = s.z0(h2);
  const char* names[] = {"motion x", "motion y", "motion z"};
  for (std::size_t i = 0; i < 3; ++i) {
    Equation<T> eq{names[i], {}};
    if (!gz0[i].is_zero())
      eq.terms.push_back(scale(gz0[i] / RF(2), z0h2));
    if (!gdz[i].is_zero())
      eq.terms.push_back(scale(gdz[i], h2));
    eq.terms.push_back(d(V, sym::coordinates()[i]));
    sys.equations.push_back(std::move(eq));
  }
}

template <class T>
System<T> curved_system(const Session& s, const T& V, const std::optional<T>& energy) {
  System<T> sys;
  std::array<T, 3> dv;
  for (std::size_t i = 0; i < 3; ++i)
    dv[i] = d(V, sym::coordinates()[i]);
  Equation<T> xv{"X(V)", {}};
  for (std::size_t i = 0; i < 3; ++i)
    if (!s.x[i].is_zero())
      xv.terms.push_back(scale(s.x[i], dv[i]));
  sys.equations.push_back(std::move(xv));

  T z1v = s.z1(V);
  T z2v = s.z2(V);
  T h2 = scale(-s.dz_phi.inverse(), z1v);
  if (energy)
    sys.equations.push_back({"energy", {scale(s.a, z1v), scale(RF(-1), V), *energy}});
  else
    sys.equations.push_back({"energy-free", {scale(s.a, s.z0(z1v)), scale(RF(-1), s.z0(V)), scale(s.z0(s.a), z1v)}});
  sys.equations.push_back({"h2 cross-check", {scale(s.dz_phi, z2v), scale(-s.dz_psi, z1v)}});
  add_motion(sys, s, V, h2);
  sys.h2 = h2;
  return sys;
}

template <class T>
System<T> straight_system(const Session& s, const T& V, const std::optional<T>& energy) {
  System<T> sys;
  sys.equations.push_back({"Z1(V)", {s.z1(V)}});
  sys.equations.push_back({"Z2(V)", {s.z2(V)}});
  if (energy && !s.g00.is_zero()) {
    T h2 = scale(RF(2) / s.g00, *energy + scale(RF(-1), V));
    add_motion(sys, s, V, h2);
    sys.h2 = h2;
  }
  return sys;
}

template <class T>
System<Expr> to_expr_system(const System<T>& sys) {
  System<Expr> out;
  for (const auto& eq : sys.equations) {
    Equation<Expr> e{eq.name, {}};
    for (const auto& t : eq.terms)
      e.terms.push_back(to_expr(t));
    out.equations.push_back(std::move(e));
  }
  if (sys.h2)
    out.h2 = to_expr(*sys.h2);
  return out;
}

struct Samples {
  std::vector<NumericPoint> points;
  // values[p][e][t]: term t of equation e at point p.
  std::vector<std::vector<std::vector<double>>> values;
  std::vector<double> h2;
  std::uint32_t mask = 0;
};

Samples sample(const System<Expr>& sys, const SamplingOptions& opts) {
  Samples out;
  for (const auto& eq : sys.equations)
    for (const auto& t : eq.terms)
      out.mask |= t.support();
  if (sys.h2)
    out.mask |= sys.h2->support();
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> mag(opts.lo, opts.hi);
  std::bernoulli_distribution sign(0.5);
  long budget = static_cast<long>(opts.points) * opts.attempts_per_point;
  while (static_cast<int>(out.points.size()) < opts.points && budget-- > 0) {
    NumericPoint p = empty_point();
    for (std::size_t i = 0; i < kMaxSymbols; ++i)
      if ((out.mask >> i) & 1u) {
        double v = mag(rng);
        p[i] = sign(rng) ? -v : v;
      }
    try {
      EvalStats st;
      std::vector<std::vector<double>> vals;
      for (const auto& eq : sys.equations) {
        std::vector<double> row;
        for (const auto& t : eq.terms)
          row.push_back(t.evaluate(p, &st));
        vals.push_back(std::move(row));
      }
      double h2 = sys.h2 ? sys.h2->evaluate(p, &st) : 0.0;
      if (st.min_abs_denominator < opts.min_denominator || st.min_log_argument <= 0)
        continue;
      bool finite = std::isfinite(h2);
      for (const auto& row : vals)
        for (double v : row)
          finite = finite && std::isfinite(v);
      if (!finite)
        continue;
      out.points.push_back(p);
      out.values.push_back(std::move(vals));
      out.h2.push_back(h2);
    } catch (const DivisionByZero&) {
    } catch (const DomainError&) {
    }
  }
  return out;
}

std::map<std::string, double> describe(const NumericPoint& p, std::uint32_t mask) {
  std::map<std::string, double> out;
  for (std::size_t i = 0; i < kMaxSymbols; ++i)
    if ((mask >> i) & 1u)
      out[Symbol::from_index(i).name()] = p[i];
  return out;
}

void fill_numeric(ResidualReport& r, const Samples& smp, const SamplingOptions& opts, bool set_status) {
  for (std::size_t e = 0; e < r.residuals.size(); ++e) {
    Residual& res = r.residuals[e];
    res.samples = static_cast<int>(smp.points.size());
    double worst = -1;
    for (std::size_t p = 0; p < smp.points.size(); ++p) {
      double total = 0, mag = 0;
      for (double v : smp.values[p][e]) {
        total += v;
        mag += std::abs(v);
      }
      double norm = std::abs(total) / (1 + mag);
      if (norm > worst) {
        worst = norm;
        res.max_normalized = norm;
        res.witness = describe(smp.points[p], smp.mask);
        res.witness_value = total;
      }
    }
    if (set_status)
      res.status = res.max_normalized < opts.tolerance ? ResidualStatus::numerically_zero : ResidualStatus::nonzero;
  }
  if (!smp.h2.empty() && r.h_squared) {
    r.h_squared_min = *std::min_element(smp.h2.begin(), smp.h2.end());
    r.h_squared_max = *std::max_element(smp.h2.begin(), smp.h2.end());
    if (*r.h_squared_min <= 0)
      r.notes.push_back("h^2 is not positive at every sample point");
  }
}

template <class T>
ResidualReport assemble(const System<T>& sys, bool symbolic, const SamplingOptions& opts) {
  ResidualReport r;
  r.symbolic = symbolic;
  if (sys.h2)
    r.h_squared = to_string(to_expr(*sys.h2));
  for (const auto& eq : sys.equations) {
    Residual res;
    res.name = eq.name;
    if constexpr (std::is_same_v<T, RF>)
      res.status = sum(eq.terms).is_zero() ? ResidualStatus::identically_zero : ResidualStatus::nonzero;
    r.residuals.push_back(std::move(res));
  }
  System<Expr> es = to_expr_system(sys);
  Samples smp = sample(es, opts);
  if (!symbolic) {
    if (smp.points.empty())
      throw DomainError("no admissible sample point: every candidate point hit a singular locus");
    if (static_cast<int>(smp.points.size()) < opts.points)
      r.notes.push_back("only " + std::to_string(smp.points.size()) + " admissible sample points");
  } else if (smp.points.empty()) {
    r.notes.push_back("no admissible sample point for witnesses");
  }
  fill_numeric(r, smp, opts, !symbolic);
  if (sys.h2) {
    if constexpr (std::is_same_v<T, RF>)
      if (sys.h2->is_zero())
        r.notes.push_back("h^2 vanishes identically");
  }
  return r;
}

bool is_coordinate_free(const Expr& V) { return (V.support() & 0x7u) == 0; }

template <class T>
ResidualReport run(const Session& s, const T& V, const std::optional<T>& energy, bool straight,
                   const SamplingOptions& opts, bool symbolic) {
  System<T> sys = straight ? straight_system(s, V, energy) : curved_system(s, V, energy);
  return assemble(sys, symbolic, opts);
}

ResidualReport dispatch(const Session& s, const CandidateSolution& raw, const SamplingOptions& opts, bool straight) {
  CandidateSolution c{bind_metric_parameters(s.metric, raw.V), std::nullopt};
  std::optional<Expr> energy;
  if (raw.energy)
    energy = compose_energy(s, bind_metric_parameters(s.metric, *raw.energy));
  auto vr = c.V.as_rational();
  std::optional<RF> er;
  bool rational = vr.has_value();
  if (energy) {
    er = energy->as_rational();
    rational = rational && er.has_value();
  }
  ResidualReport r = rational && !opts.force_numeric ? run<RF>(s, *vr, er, straight, opts, true)
                                                     : run<Expr>(s, c.V, energy, straight, opts, false);
  r.certified = true;
  for (const auto& res : r.residuals)
    if (res.status == ResidualStatus::nonzero)
      r.certified = false;
  if (!straight && is_coordinate_free(c.V)) {
    r.notes.push_back("V is constant on curved data: no solution of this form");
    r.certified = false;
  }
  if (s.swapped)
    r.notes.push_back("phi and psi swapped for the construction of X");
  return r;
}

} // namespace

const char* to_string(ResidualStatus s) {
  switch (s) {
  case ResidualStatus::identically_zero:
    return "identically zero";
  case ResidualStatus::numerically_zero:
    return "numerically zero";
  default:
    return "nonzero";
  }
}

const Residual* ResidualReport::find(std::string_view name) const {
  for (const auto& r : residuals)
    if (r.name == name)
      return &r;
  return nullptr;
}

Expr bind_metric_parameters(const Metric& g, const Expr& e) {
  std::map<Symbol, Expr> bindings;
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j)
      bindings.emplace(sym::g(i + 1, j + 1), Expr(g(i, j)));
  return e.substitute(bindings);
}

Expr derive_h_squared(const Session& s, const Expr& raw) {
  if (s.straight_line)
    throw CaseMismatch("h^2 is not determined by V on straight-line data");
  Expr V = bind_metric_parameters(s.metric, raw);
  if (auto vr = V.as_rational())
    return Expr(-s.z1(*vr) / s.dz_phi);
  return Expr(-s.dz_phi.inverse()) * s.z1(V);
}

ResidualReport verify(const Session& s, const CandidateSolution& c, const SamplingOptions& opts) {
  return dispatch(s, c, opts, s.straight_line);
}

ResidualReport verify_case0(const Session& s, const CandidateSolution& c, const SamplingOptions& opts) {
  if (!s.straight_line)
    throw CaseMismatch("case-0 verification requested for curved data");
  return dispatch(s, c, opts, true);
}

std::string to_string(const ResidualReport& r) {
  std::string out = std::string(r.certified ? "certified" : "refuted") + " (" + (r.symbolic ? "symbolic" : "numeric") +
                    " path)\n";
  char buf[160];
  for (const auto& res : r.residuals) {
    std::snprintf(buf, sizeof buf, "  %-16s %-17s max %.3e over %d points\n", res.name.c_str(), to_string(res.status),
                  res.max_normalized, res.samples);
    out += buf;
  }
  if (r.h_squared_min) {
    std::snprintf(buf, sizeof buf, "  h^2 range [%.6g, %.6g]\n", *r.h_squared_min, *r.h_squared_max);
    out += buf;
  }
  for (const auto& n : r.notes)
    out += "  note: " + n + "\n";
  return out;
}

} // namespace invdyn
