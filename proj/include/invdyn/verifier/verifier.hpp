#pragma once

#include "invdyn/geometry/session.hpp"

#include <cstdint>
#include <optional>

namespace invdyn {

struct SamplingOptions {
  std::uint64_t seed = 0;
  int points = 25;
  /// Coordinates and free constants are drawn from [lo, hi] with a random sign.
  double lo = 0.5;
  double hi = 2.0;
  double tolerance = 1e-9;
  double min_denominator = 1e-6;
  /// Candidate points tried per accepted point before giving up.
  int attempts_per_point = 400;
  /// Sample even when every expression is rational.
  bool force_numeric = false;
};

/// Potential and optional energy function E(PHI, PSI) for the session's data and metric.
struct CandidateSolution {
  Expr V;
  std::optional<Expr> energy;
};

enum class ResidualStatus { identically_zero, numerically_zero, nonzero };
const char* to_string(ResidualStatus s);

struct Residual {
  std::string name;
  ResidualStatus status = ResidualStatus::identically_zero;
  /// Largest |sum| / (1 + sum |term|) over the samples.
  double max_normalized = 0;
  int samples = 0;
  /// Point and value where the residual is largest, when sampled.
  std::map<std::string, double> witness;
  double witness_value = 0;
};

struct ResidualReport {
  bool symbolic = true;
  bool certified = false;
  std::vector<Residual> residuals;
  /// Printed h^2, when defined.
  std::optional<std::string> h_squared;
  std::optional<double> h_squared_min;
  std::optional<double> h_squared_max;
  std::vector<std::string> notes;

  const Residual* find(std::string_view name) const;
};

/// Replaces each metric parameter g_ij in e by the corresponding entry of g.
Expr bind_metric_parameters(const Metric& g, const Expr& e);

/// h^2 = -Z1(V)/dZ(phi). Throws CaseMismatch on straight-line data.
Expr derive_h_squared(const Session& s, const Expr& V);

/// Metric parameters in V and E are bound to the session metric first.
/// Checks X(V) = 0, the energy equation (or its energy-free form), the
/// h^2 cross-check and the three-component equation of motion. Straight-line
/// data are routed to verify_case0. Throws DomainError when no sample point
/// survives the singularity filter.
ResidualReport verify(const Session& s, const CandidateSolution& c, const SamplingOptions& opts = {});

/// Z1(V) = Z2(V) = 0, plus the equation of motion with h^2 = 2(E - V)/g(Z0,Z0)
/// when E is given. Throws CaseMismatch on curved data.
ResidualReport verify_case0(const Session& s, const CandidateSolution& c, const SamplingOptions& opts = {});

std::string to_string(const ResidualReport& r);

} // namespace invdyn
