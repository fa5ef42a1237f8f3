#pragma once

#include "invdyn/verifier/verifier.hpp"

#include <iosfwd>

namespace invdyn {

using Vec3 = std::array<double, 3>;
/// Position followed by velocity.
using State = std::array<double, 6>;

/// x'' = F(x) with g F + grad V = 0, for a numeric metric.
struct SecondOrderSystem {
  Metric metric;
  std::array<std::array<double, 3>, 3> g;
  Expr V;
  std::array<Expr, 3> force;
  /// Values of the free constants in V; NaN for x, y, z.
  NumericPoint parameters;
  /// Tracked first integrals; left empty for plain systems.
  std::optional<Expr> phi;
  std::optional<Expr> psi;

  /// Metric parameters in V are bound to g first. Throws InputError when g is
  /// not numeric or a constant in V has no value.
  static SecondOrderSystem build(const Metric& g, const Expr& V, const NumericPoint& parameters);
  /// Also tracks the session's phi and psi (in the order given by the user).
  static SecondOrderSystem build(const Session& s, const Expr& V, const NumericPoint& parameters);

  NumericPoint at(const Vec3& x) const;
  Vec3 acceleration(const Vec3& x, EvalStats* stats = nullptr) const;
  double energy(const State& s, EvalStats* stats = nullptr) const;
};

/// Parameters given by name; unnamed symbols stay unassigned.
NumericPoint make_parameters(const std::map<std::string, double>& values);

struct LaunchResult {
  State state;
  double h_squared;
};

/// v0 = sign * sqrt(h^2(x0)) * Z0(x0), with h^2 derived from V (or from E on
/// straight lines, h = 1 when E is absent there). Throws DomainError when
/// h^2(x0) <= 0 or x0 is singular.
LaunchResult launch(const Session& s, const CandidateSolution& c, const Vec3& x0, int direction_sign,
                    const NumericPoint& parameters);

struct LaunchPoint {
  Vec3 x0;
  int direction_sign = 1;
};

/// Seeded search for a launch point and direction with h^2 > 0 whose
/// trajectory over `duration` keeps every denominator above 0.1 in magnitude
/// and grows neither position nor speed tenfold. Throws DomainError when none is found.
LaunchPoint find_launch_point(const Session& s, const CandidateSolution& c, const NumericPoint& parameters,
                              std::uint64_t seed, double duration, double dt, int attempts = 400);

struct Drift {
  double phi = 0;
  double psi = 0;
  double energy = 0;
};

struct TrajectoryRecord {
  std::vector<double> times;
  std::vector<State> states;
  std::vector<double> phi;
  std::vector<double> psi;
  std::vector<double> energy;
  Drift drift;
  /// Smallest |denominator| met by the force, phi, psi and E along the way.
  double min_denominator = std::numeric_limits<double>::infinity();
  bool halted = false;
  std::string halt_reason;
};

/// Classical fixed-step RK4. Stops early, keeping the partial record, when a
/// denominator falls below 1e-8 in magnitude. Throws DomainError when state0
/// itself is singular.
TrajectoryRecord integrate(const SecondOrderSystem& sys, const State& state0, double duration, double dt);

/// Drift maxima over the stored samples.
Drift compute_drift(const TrajectoryRecord& tr);

struct ConservationSummary {
  Drift drift;
  std::optional<double> energy_match;
  std::size_t steps = 0;
  bool halted = false;
};

/// energy_match = |E(0) - E(phi0, psi0)| when an energy function is given.
ConservationSummary conservation_report(const TrajectoryRecord& tr, const Session& s,
                                        const std::optional<Expr>& energy, const NumericPoint& parameters);

/// Coarse and fine drifts are consistent with the scheme's order when
/// coarse / fine >= factor, or when both sit below the roundoff floor.
bool order_consistent(double coarse, double fine, double factor = 8, double floor = 1e-12);

void write_csv(std::ostream& out, const TrajectoryRecord& tr);

} // namespace invdyn
