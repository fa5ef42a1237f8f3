#include "invdyn/cli/commands.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#ifndef INVDYN_CORPUS_DIR
#define INVDYN_CORPUS_DIR "corpus"
#endif

using namespace invdyn::cli;

namespace {

struct Flags {
  std::string json_path;
  std::uint64_t seed = 0;
  int points = 0;
  double tol = 0;
  double dt = 0;
  double T = 0;
  std::string filter;
  std::string mutate;
  std::string csv_path;
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--json", f.json_path, "Write the JSON report to PATH");
  cmd->add_option("--seed", f.seed, "Seed for sampling, launch and search");
  cmd->add_option("--points", f.points, "Number of sample points")->check(CLI::PositiveNumber);
  cmd->add_option("--tol", f.tol, "Residual tolerance on the sampled path")->check(CLI::PositiveNumber);
  cmd->add_option("--dt", f.dt, "Integrator step")->check(CLI::PositiveNumber);
  cmd->add_option("--T", f.T, "Integration time")->check(CLI::PositiveNumber);
  cmd->add_option("--mutate", f.mutate, "Perturb a candidate field: V (adds x) or E (adds PHI)");
}

RunOptions options(CLI::App* cmd, const Flags& f) {
  RunOptions o;
  if (cmd->count("--seed"))
    o.seed = f.seed;
  if (cmd->count("--points"))
    o.points = f.points;
  if (cmd->count("--tol"))
    o.tol = f.tol;
  if (cmd->count("--dt"))
    o.dt = f.dt;
  if (cmd->count("--T"))
    o.T = f.T;
  if (!f.mutate.empty())
    o.mutate = parse_mutation(f.mutate);
  return o;
}

int emit(const CommandResult& r, const Flags& f) {
  std::cout << r.text;
  if (!f.json_path.empty()) {
    std::ofstream out(f.json_path);
    if (!out) {
      std::cerr << "error: cannot write " << f.json_path << '\n';
      return kExitInput;
    }
    out << r.report.dump(2) << '\n';
  }
  return r.exit_code;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Potentials and metrics for prescribed families of orbits"};
  app.require_subcommand(1);
  Flags f;
  std::string file;
  std::string corpus_dir = INVDYN_CORPUS_DIR;

  std::map<std::string, CommandResult (*)(const Problem&, const RunOptions&)> single{
      {"classify", run_classify}, {"verify", run_verify}, {"simulate", run_simulate}, {"search", run_search}};
  std::map<std::string, std::string> help{{"classify", "Classify the curve data for the problem's metric"},
                                          {"verify", "Check a candidate potential and energy function"},
                                          {"simulate", "Integrate a trajectory and measure conservation drift"},
                                          {"search", "Search for a metric that makes the data Case 1"}};
  std::map<std::string, CLI::App*> cmds;
  for (const auto& [name, run] : single) {
    CLI::App* cmd = app.add_subcommand(name, help[name]);
    cmd->add_option("file", file, "Problem file")->required();
    add_common(cmd, f);
    cmds[name] = cmd;
  }
  cmds["simulate"]->add_option("--csv", f.csv_path, "Write the trajectory as CSV to PATH");
  CLI::App* corpus = app.add_subcommand("corpus", "Run every bundled problem against its expectations");
  corpus->add_option("dir", corpus_dir, "Corpus directory");
  corpus->add_option("--filter", f.filter, "Only problems carrying TAG");
  add_common(corpus, f);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    if (corpus->parsed())
      return emit(run_corpus(corpus_files(corpus_dir), options(corpus, f), f.filter), f);
    for (const auto& [name, cmd] : cmds) {
      if (!cmd->parsed())
        continue;
      RunOptions o = options(cmd, f);
      Problem p = load_problem(file);
      o.csv_path = f.csv_path;
      return emit(single[name](p, o), f);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
  return kExitInput;
}
