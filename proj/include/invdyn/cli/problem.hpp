#pragma once

#include "invdyn/classifier/classifier.hpp"
#include "invdyn/dynamics/dynamics.hpp"

#include <json.hpp>

#include <filesystem>

namespace invdyn::cli {

using Json = nlohmann::ordered_json;

inline constexpr int kFormatVersion = 1;

enum class MetricMode { euclidean, explicit_entries, symbolic, search };

struct MetricSpec {
  MetricMode mode = MetricMode::euclidean;
  /// explicit: g11, g12, g13, g22, g23, g33 as rationals.
  std::array<std::string, 6> entries;
  /// symbolic: parameter name -> expression in the other parameters.
  std::map<std::string, std::string> overrides;
};

struct CandidateSpec {
  std::string V;
  std::optional<std::string> E;
};

struct SamplingSpec {
  std::uint64_t seed = 0;
  int points = 25;
  double lo = 0.5;
  double hi = 2.0;
  double tolerance = 1e-9;
};

struct IntegratorSpec {
  double T = 1;
  double dt = 1e-3;
  std::optional<Vec3> x0;
  int direction = 1;
  double drift_tolerance = 1e-6;
};

struct SearchSpec {
  int restarts = 200;
  /// Candidates passed to exact certification, best first.
  int certify_limit = 20;
};

/// Corpus expectations; absent fields are not checked.
struct Expectation {
  std::vector<CaseLabel> labels; // any of
  std::optional<bool> certified;
  std::optional<bool> energy_compatible;
  std::optional<bool> search_certified;
  std::optional<CaseLabel> search_label;
  std::optional<bool> conserved;

  bool empty() const {
    return labels.empty() && !certified && !energy_compatible && !search_certified && !conserved;
  }
};

struct Problem {
  std::string name;
  std::string citation;
  std::vector<std::string> tags;
  std::vector<std::string> constants;
  std::string phi;
  std::string psi;
  MetricSpec metric;
  std::optional<CandidateSpec> candidate;
  /// Values for simulation: free constants and, for a symbolic metric, the
  /// metric parameters. Exact rationals.
  std::map<std::string, mpq_class> parameters;
  SamplingSpec sampling;
  IntegratorSpec integrator;
  SearchSpec search;
  Expectation expect;

  bool has_tag(std::string_view tag) const;
};

/// Throws InputError with the offending key on any schema violation.
Problem parse_problem(const Json& j);
Problem load_problem(const std::filesystem::path& path);
Json to_json(const Problem& p);

const char* to_string(MetricMode m);

/// Declared constants plus PHI, PSI.
SymbolTable symbol_table(const Problem& p);
CurveData curve_data(const Problem& p);
/// Not available in search mode.
Metric metric_of(const Problem& p);

enum class Mutation { none, V, E };
/// Parses "V" or "E"; throws InputError otherwise.
Mutation parse_mutation(std::string_view field);

/// V + x or E + PHI when mutated. Throws InputError without a candidate.
CandidateSolution candidate_of(const Problem& p, Mutation m = Mutation::none);

/// Metric parameters in `parameters` substituted into g.
Metric instantiate_metric(const Problem& p, const Metric& g);
/// Free constants only.
NumericPoint numeric_parameters(const Problem& p);

} // namespace invdyn::cli
