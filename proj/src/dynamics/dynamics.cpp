#include "invdyn/dynamics/dynamics.hpp"

#include "invdyn/classifier/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>

namespace invdyn {

namespace {

constexpr double kHaltDenominator = 1e-8;
// Launch trajectories keep this distance from singular loci, where evaluating
// phi and psi amplifies roundoff.
constexpr double kLaunchClearance = 0.1;

void require_assigned(const Expr& e, const NumericPoint& p, const char* what) {
  std::uint32_t missing = e.support() & ~0x7u;
  for (std::size_t i = 3; i < kMaxSymbols; ++i)
    if (((missing >> i) & 1u) && std::isnan(p[i]))
      throw InputError(std::string(what) + " needs a value for '" + Symbol::from_index(i).name() + "'");
}

double eval(const Expr& e, const NumericPoint& p, EvalStats* st) { return e.evaluate(p, st); }

NumericPoint with_position(const NumericPoint& base, const Vec3& x) {
  NumericPoint p = base;
  for (std::size_t i = 0; i < 3; ++i)
    p[i] = x[i];
  return p;
}

Vec3 position(const State& s) { return {s[0], s[1], s[2]}; }

struct Derivative {
  State value;
  EvalStats stats;
};

Derivative rhs(const SecondOrderSystem& sys, const State& s) {
  Derivative d;
  Vec3 a = sys.acceleration(position(s), &d.stats);
  d.value = {s[3], s[4], s[5], a[0], a[1], a[2]};
  return d;
}

State axpy(const State& s, double h, const State& k) {
  State out;
  for (std::size_t i = 0; i < 6; ++i)
    out[i] = s[i] + h * k[i];
  return out;
}

bool finite(const State& s) {
  for (double v : s)
    if (!std::isfinite(v))
      return false;
  return true;
}

void record(TrajectoryRecord& tr, const SecondOrderSystem& sys, double t, const State& s) {
  NumericPoint p = sys.at(position(s));
  EvalStats st;
  tr.times.push_back(t);
  tr.states.push_back(s);
  tr.phi.push_back(sys.phi ? eval(*sys.phi, p, &st) : 0.0);
  tr.psi.push_back(sys.psi ? eval(*sys.psi, p, &st) : 0.0);
  tr.energy.push_back(sys.energy(s, &st));
  tr.min_denominator = std::min(tr.min_denominator, st.min_abs_denominator);
}

double norm(double a, double b, double c) { return std::sqrt(a * a + b * b + c * c); }

// Not halted, clear of singular loci, and neither position nor speed grows
// tenfold: a fixed step cannot follow an escape to infinity.
bool stays_bounded(const TrajectoryRecord& tr) {
  if (tr.halted || tr.min_denominator < kLaunchClearance)
    return false;
  const State& s0 = tr.states.front();
  double r0 = std::max(1.0, norm(s0[0], s0[1], s0[2]));
  double v0 = std::max(1.0, norm(s0[3], s0[4], s0[5]));
  for (const State& s : tr.states)
    if (norm(s[0], s[1], s[2]) > 10 * r0 || norm(s[3], s[4], s[5]) > 10 * v0)
      return false;
  return true;
}

} // namespace

SecondOrderSystem SecondOrderSystem::build(const Metric& g, const Expr& V, const NumericPoint& parameters) {
  if (!g.is_numeric())
    throw InputError("dynamics needs a numeric metric");
  SecondOrderSystem sys{g, {}, bind_metric_parameters(g, V), {}, parameters, std::nullopt, std::nullopt};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      sys.g[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = g(i, j).constant_value().get_d();
  for (std::size_t i = 0; i < 3; ++i)
    sys.parameters[i] = std::numeric_limits<double>::quiet_NaN();
  require_assigned(sys.V, sys.parameters, "V");
  auto coords = sym::coordinates();
  std::array<Expr, 3> grad;
  auto vr = sys.V.as_rational();
  for (std::size_t k = 0; k < 3; ++k)
    grad[k] = vr ? Expr(vr->derivative(coords[k])) : sys.V.derivative(coords[k]);
  for (int i = 0; i < 3; ++i) {
    if (vr) {
      RF f;
      for (int k = 0; k < 3; ++k)
        f += g.inverse(i, k) * vr->derivative(coords[static_cast<std::size_t>(k)]);
      sys.force[static_cast<std::size_t>(i)] = Expr(-f);
      continue;
    }
    std::vector<Expr> terms;
    for (int k = 0; k < 3; ++k)
      if (!g.inverse(i, k).is_zero())
        terms.push_back(Expr(-g.inverse(i, k)) * grad[static_cast<std::size_t>(k)]);
    sys.force[static_cast<std::size_t>(i)] = Expr::add(std::move(terms));
  }
  return sys;
}

SecondOrderSystem SecondOrderSystem::build(const Session& s, const Expr& V, const NumericPoint& parameters) {
  SecondOrderSystem sys = build(s.metric, V, parameters);
  sys.phi = s.swapped ? s.data.psi : s.data.phi;
  sys.psi = s.swapped ? s.data.phi : s.data.psi;
  require_assigned(*sys.phi, sys.parameters, "phi");
  require_assigned(*sys.psi, sys.parameters, "psi");
  return sys;
}

NumericPoint SecondOrderSystem::at(const Vec3& x) const { return with_position(parameters, x); }

Vec3 SecondOrderSystem::acceleration(const Vec3& x, EvalStats* stats) const {
  NumericPoint p = at(x);
  return {eval(force[0], p, stats), eval(force[1], p, stats), eval(force[2], p, stats)};
}

double SecondOrderSystem::energy(const State& s, EvalStats* stats) const {
  double kinetic = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      kinetic += g[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] * s[3 + static_cast<std::size_t>(i)] *
                 s[3 + static_cast<std::size_t>(j)];
  return kinetic / 2 + eval(V, at(position(s)), stats);
}

NumericPoint make_parameters(const std::map<std::string, double>& values) {
  NumericPoint p = empty_point();
  for (const auto& [name, v] : values)
    p[Symbol::intern(name).index()] = v;
  return p;
}

LaunchResult launch(const Session& s, const CandidateSolution& c, const Vec3& x0, int direction_sign,
                    const NumericPoint& parameters) {
  NumericPoint p = with_position(parameters, x0);
  EvalStats st;
  double h2 = 1;
  try {
    if (!s.straight_line) {
      h2 = eval(derive_h_squared(s, c.V), p, &st);
    } else if (c.energy) {
      Expr e = compose_energy(s, bind_metric_parameters(s.metric, *c.energy));
      Expr v = bind_metric_parameters(s.metric, c.V);
      h2 = 2 * (eval(e, p, &st) - eval(v, p, &st)) / eval(Expr(s.g00), p, &st);
    }
    Vec3 z0{eval(Expr(s.z0[0]), p, &st), eval(Expr(s.z0[1]), p, &st), eval(Expr(s.z0[2]), p, &st)};
    if (st.min_abs_denominator < kHaltDenominator || !std::isfinite(h2))
      throw DomainError("launch point is singular");
    if (h2 <= 0)
      throw DomainError("h^2 = " + std::to_string(h2) + " <= 0 at the launch point");
    double h = (direction_sign < 0 ? -1 : 1) * std::sqrt(h2);
    return {{x0[0], x0[1], x0[2], h * z0[0], h * z0[1], h * z0[2]}, h2};
  } catch (const DivisionByZero&) {
    throw DomainError("launch point is singular");
  }
}

LaunchPoint find_launch_point(const Session& s, const CandidateSolution& c, const NumericPoint& parameters,
                              std::uint64_t seed, double duration, double dt, int attempts) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> mag(0.5, 2.0);
  std::bernoulli_distribution sign(0.5);
  SecondOrderSystem sys = SecondOrderSystem::build(s, c.V, parameters);
  for (int i = 0; i < attempts; ++i) {
    Vec3 x0;
    for (double& v : x0)
      v = sign(rng) ? -mag(rng) : mag(rng);
    for (int direction : {1, -1}) {
      try {
        LaunchResult l = launch(s, c, x0, direction, parameters);
        if (stays_bounded(integrate(sys, l.state, duration, dt)))
          return {x0, direction};
      } catch (const DomainError&) {
      }
    }
  }
  throw DomainError("no admissible launch point found");
}

TrajectoryRecord integrate(const SecondOrderSystem& sys, const State& state0, double duration, double dt) {
  if (!(dt > 0) || duration < dt)
    throw InputError("integration needs dt > 0 and T >= dt");
  TrajectoryRecord tr;
  Derivative k1;
  try {
    k1 = rhs(sys, state0);
  } catch (const DivisionByZero&) {
    throw DomainError("initial state is singular");
  }
  if (k1.stats.min_abs_denominator < kHaltDenominator || !finite(k1.value))
    throw DomainError("initial state is singular");
  tr.min_denominator = k1.stats.min_abs_denominator;
  record(tr, sys, 0, state0);
  auto steps = static_cast<long>(std::llround(duration / dt));
  State s = state0;
  for (long n = 0; n < steps; ++n) {
    try {
      if (n > 0)
        k1 = rhs(sys, s);
      Derivative k2 = rhs(sys, axpy(s, dt / 2, k1.value));
      Derivative k3 = rhs(sys, axpy(s, dt / 2, k2.value));
      Derivative k4 = rhs(sys, axpy(s, dt, k3.value));
      double smallest = std::min({k1.stats.min_abs_denominator, k2.stats.min_abs_denominator,
                                  k3.stats.min_abs_denominator, k4.stats.min_abs_denominator});
      State next;
      for (std::size_t i = 0; i < 6; ++i)
        next[i] = s[i] + dt / 6 * (k1.value[i] + 2 * k2.value[i] + 2 * k3.value[i] + k4.value[i]);
      tr.min_denominator = std::min(tr.min_denominator, smallest);
      if (smallest < kHaltDenominator || !finite(next)) {
        tr.halted = true;
        tr.halt_reason = "singularity approached at t = " + std::to_string(static_cast<double>(n) * dt);
        break;
      }
      s = next;
      record(tr, sys, static_cast<double>(n + 1) * dt, s);
    } catch (const Error& e) {
      tr.halted = true;
      tr.halt_reason = e.what();
      break;
    }
  }
  tr.drift = compute_drift(tr);
  return tr;
}

Drift compute_drift(const TrajectoryRecord& tr) {
  Drift d;
  for (std::size_t i = 0; i < tr.states.size(); ++i) {
    d.phi = std::max(d.phi, std::abs(tr.phi[i] - tr.phi[0]));
    d.psi = std::max(d.psi, std::abs(tr.psi[i] - tr.psi[0]));
    d.energy = std::max(d.energy, std::abs(tr.energy[i] - tr.energy[0]));
  }
  return d;
}

ConservationSummary conservation_report(const TrajectoryRecord& tr, const Session& s,
                                        const std::optional<Expr>& energy, const NumericPoint& parameters) {
  ConservationSummary out;
  out.drift = compute_drift(tr);
  out.steps = tr.states.empty() ? 0 : tr.states.size() - 1;
  out.halted = tr.halted;
  if (energy && !tr.states.empty()) {
    Expr e = compose_energy(s, bind_metric_parameters(s.metric, *energy));
    double expected = e.evaluate(with_position(parameters, position(tr.states[0])));
    out.energy_match = std::abs(tr.energy[0] - expected);
  }
  return out;
}

bool order_consistent(double coarse, double fine, double factor, double floor) {
  if (coarse <= floor && fine <= floor)
    return true;
  return fine * factor <= coarse;
}

void write_csv(std::ostream& out, const TrajectoryRecord& tr) {
  out << "t,x,y,z,vx,vy,vz,phi,psi,E\n";
  char buf[64];
  auto put = [&](double v, bool last) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << buf << (last ? '\n' : ',');
  };
  for (std::size_t i = 0; i < tr.states.size(); ++i) {
    put(tr.times[i], false);
    for (double v : tr.states[i])
      put(v, false);
    put(tr.phi[i], false);
    put(tr.psi[i], false);
    put(tr.energy[i], true);
  }
}

} // namespace invdyn
