#pragma once

#include "invdyn/cli/problem.hpp"
#include "invdyn/metric_search/metric_search.hpp"

namespace invdyn::cli {

inline constexpr const char* kReportSchema = "invdyn-report/1";

/// Command-line overrides of the problem file.
struct RunOptions {
  std::optional<std::uint64_t> seed;
  std::optional<int> points;
  std::optional<double> tol;
  std::optional<double> dt;
  std::optional<double> T;
  Mutation mutate = Mutation::none;
  /// simulate only: trajectory output.
  std::string csv_path;
};

enum ExitCode { kExitOk = 0, kExitRefuted = 1, kExitInput = 2 };

struct CommandResult {
  int exit_code = kExitOk;
  Json report;
  std::string text;
};

CommandResult run_classify(const Problem& p, const RunOptions& o);
CommandResult run_verify(const Problem& p, const RunOptions& o);
CommandResult run_simulate(const Problem& p, const RunOptions& o);
CommandResult run_search(const Problem& p, const RunOptions& o);

/// *.json files of a directory in name order.
std::vector<std::filesystem::path> corpus_files(const std::filesystem::path& dir);

/// Runs every expectation of every file carrying `filter` (all when empty).
CommandResult run_corpus(const std::vector<std::filesystem::path>& files, const RunOptions& o,
                         const std::string& filter = {});

// Building blocks shared with the acceptance runner.

std::uint64_t effective_seed(const Problem& p, const RunOptions& o);
SamplingOptions sampling_options(const Problem& p, const RunOptions& o);

struct SearchOutcome {
  ConditionSystem system;
  std::vector<MetricCandidate> candidates;
  std::vector<Certification> certifications;
  /// First certified candidate.
  std::optional<Metric> metric;
  std::optional<CaseLabel> label;
};

SearchOutcome search_metric(const Problem& p, const RunOptions& o);

/// The fixed metric, or the first certified search result. Throws
/// CaseMismatch when the search certifies nothing.
Metric resolve_metric(const Problem& p, const RunOptions& o);

struct SimulationOutcome {
  LaunchPoint launch;
  double h_squared = 0;
  TrajectoryRecord coarse;
  /// Same launch with dt / 2.
  TrajectoryRecord fine;
  ConservationSummary summary;
  /// phi, psi, E drift ratios consistent with the scheme order.
  std::array<bool, 3> order_ok{};
  bool within_tolerance = false;
  bool conserved = false;
};

/// Launch uses the unmutated candidate; the mutation only changes the force.
/// Throws InputError when the metric cannot be made numeric.
SimulationOutcome simulate(const Problem& p, const RunOptions& o, const Metric& g);

/// Every residual of the case's energy conditions vanishes identically.
bool energy_compatible(const Problem& p, const Metric& g, Mutation m = Mutation::none);

/// 2 for malformed input, 1 otherwise.
int exit_code_for(const std::exception& e);

} // namespace invdyn::cli
