#pragma once

#include "invdyn/classifier/classifier.hpp"

#include <cstdint>

namespace invdyn {

/// Polynomial condition on the six metric parameters, with the (x,y,z)
/// monomial it was read off from.
struct Condition {
  ZPoly poly;
  std::string monomial;
};

struct ConditionSystem {
  /// Coefficients of the numerator of c in [X,Z1] = aX + bZ1 + cZ0.
  std::vector<Condition> conditions;
  /// Same construction applied to d(alpha0) ^ alpha0 with alpha0 = g(Z0, .).
  std::vector<Condition> dual_conditions;
  /// Parameter-only factor removed from every condition.
  ZPoly removed_content{1};
};

/// Throws CaseMismatch when the data are straight lines for generic g.
ConditionSystem extract_case1_conditions(const CurveData& data);

struct MetricCandidate {
  /// g11, g12, g13, g22, g23, g33 with unit Euclidean norm.
  std::array<double, 6> entries{};
  /// Sum of squared (normalized) conditions.
  double residual = 0;
  double dual_residual = 0;
  double det = 0;
};

struct SearchOptions {
  int restarts = 200;
  std::uint64_t seed = 0;
  double accept_residual = 1e-12;
  double min_det = 1e-6;
  /// Candidates closer than this (up to sign) are merged.
  double cluster_distance = 1e-6;
  int max_iterations = 300;
};

/// Sum of squared conditions, each scaled by its largest coefficient.
double condition_residual(const std::vector<Condition>& conditions, const std::array<double, 6>& g);

/// Levenberg-Marquardt from seeded random starts on the unit sphere. Sorted
/// by residual, then lexicographically.
std::vector<MetricCandidate> solve_numeric(const ConditionSystem& sys, const SearchOptions& opts = {});

/// Scaled so the largest entry is 1, then each entry rounded by continued
/// fractions with denominators up to max_den. Empty unless every condition
/// vanishes exactly at the rounded entries.
std::optional<std::array<mpq_class, 6>> rationalize(const MetricCandidate& m, const ConditionSystem& sys,
                                                    long max_den = 64);

struct Certification {
  std::optional<std::array<mpq_class, 6>> entries;
  std::optional<CaseLabel> label;
  bool certified = false;
  std::string note;
};

/// Exact re-classification with the rationalized metric; certified when the
/// label is Case1a1 or Case1a2.
Certification certify_candidate(const CurveData& data, const MetricCandidate& m, const ConditionSystem& sys);

} // namespace invdyn
