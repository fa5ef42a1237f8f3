#include "invdyn/cli/commands.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sys/wait.h>

using namespace invdyn;
using namespace invdyn::cli;

namespace {

std::filesystem::path corpus() { return INVDYN_CORPUS_DIR; }

Problem load(const std::string& file) { return load_problem(corpus() / file); }

Json minimal() {
  return Json::parse(R"({"name": "t", "phi": "x*z", "psi": "y*z", "metric": {"mode": "euclidean"}})");
}

std::string input_error(const Json& j) {
  try {
    parse_problem(j);
  } catch (const InputError& e) {
    return e.what();
  }
  return "";
}

int tool(const std::string& args) {
  int status = std::system((std::string(INVDYN_TOOL) + " " + args + " > /dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

} // namespace

TEST(Problem, RoundTrip) {
  Problem p = load("16_sheared_products.json");
  EXPECT_EQ(p.metric.mode, MetricMode::symbolic);
  EXPECT_EQ(p.metric.overrides.at("g22"), "g11");
  EXPECT_EQ(p.parameters.at("C"), mpq_class(3, 4));
  Problem q = parse_problem(to_json(p));
  EXPECT_EQ(to_json(q).dump(), to_json(p).dump());
}

TEST(Problem, Validation) {
  EXPECT_EQ(input_error(minimal()), "");
  Json j = minimal();
  j["colour"] = "red";
  EXPECT_NE(input_error(j).find("unknown key 'colour'"), std::string::npos);
  j = minimal();
  j.erase("psi");
  EXPECT_NE(input_error(j).find("missing 'psi'"), std::string::npos);
  j = minimal();
  j["candidate"] = {{"V", "C*x"}};
  EXPECT_NE(input_error(j).find("candidate.V"), std::string::npos);
  j["constants"] = {"C"};
  EXPECT_EQ(input_error(j), "");
  j = minimal();
  j["metric"] = {{"mode", "explicit"}, {"entries", {1, 0, 0, 1, 0}}};
  EXPECT_NE(input_error(j).find("metric.entries"), std::string::npos);
  j["metric"]["entries"] = {1, 0, 0, 1, 0, "1/x"};
  EXPECT_NE(input_error(j).find("not a rational"), std::string::npos);
  j = minimal();
  j["constants"] = {"g11"};
  EXPECT_NE(input_error(j).find("cannot be declared"), std::string::npos);
  j = minimal();
  j["parameters"] = {{"k", 1}};
  EXPECT_NE(input_error(j).find("parameters.k"), std::string::npos);
  j = minimal();
  j["expect"] = {{"label", "Case3"}};
  EXPECT_NE(input_error(j).find("unknown case label"), std::string::npos);
  j = minimal();
  j["format"] = 2;
  EXPECT_NE(input_error(j).find("unsupported version"), std::string::npos);
  EXPECT_THROW(parse_mutation("W"), InputError);
}

TEST(Commands, Classify) {
  CommandResult r = run_classify(load("04_products_euclid.json"), {});
  EXPECT_EQ(r.exit_code, kExitOk);
  EXPECT_NE(r.text.find("Case 1a1"), std::string::npos);
  EXPECT_EQ(r.report["classification"]["label"], "Case1a1");
  EXPECT_EQ(r.report["schema"], kReportSchema);
  EXPECT_EQ(r.report["input"]["name"], "products_euclid");
}

TEST(Commands, Verify) {
  CommandResult ok = run_verify(load("08_cubic_restricted.json"), {});
  EXPECT_EQ(ok.exit_code, kExitOk);
  EXPECT_NE(ok.text.find("certified"), std::string::npos);
  CommandResult off = run_verify(load("09_cubic_off_family.json"), {});
  EXPECT_EQ(off.exit_code, kExitRefuted);
  EXPECT_NE(off.text.find("refuted"), std::string::npos);
  RunOptions mutated;
  mutated.mutate = Mutation::V;
  EXPECT_EQ(run_verify(load("08_cubic_restricted.json"), mutated).exit_code, kExitRefuted);
}

TEST(Commands, InputErrors) {
  Problem p = parse_problem(minimal());
  EXPECT_EQ(run_verify(p, {}).exit_code, kExitInput); // no candidate
  Problem degenerate = parse_problem(Json::parse(R"({"name": "d", "phi": "x + y", "psi": "2*x + 2*y"})"));
  CommandResult r = run_classify(degenerate, {});
  EXPECT_EQ(r.exit_code, kExitInput);
  EXPECT_TRUE(r.report.contains("error"));
  Problem symbolic = load("05_products_restricted.json");
  symbolic.parameters.clear();
  EXPECT_EQ(run_simulate(symbolic, {}).exit_code, kExitInput);
}

TEST(Commands, SimulateAndSearch) {
  CommandResult s = run_simulate(load("12_cylinders_euclid.json"), {});
  EXPECT_EQ(s.exit_code, kExitOk) << s.text;
  EXPECT_TRUE(s.report["simulation"]["conserved"].get<bool>());
  RunOptions mutated;
  mutated.mutate = Mutation::V;
  EXPECT_EQ(run_simulate(load("12_cylinders_euclid.json"), mutated).exit_code, kExitRefuted);
  CommandResult found = run_search(load("17_sheared_products_search.json"), {});
  EXPECT_EQ(found.exit_code, kExitOk);
  EXPECT_EQ(found.report["search"]["label"], "Case1a2");
  EXPECT_EQ(run_search(load("11_cubic_search.json"), {}).exit_code, kExitRefuted);
}

TEST(Commands, ReportsAreReproducible) {
  Problem p = load("16_sheared_products.json");
  RunOptions o;
  o.seed = 7;
  EXPECT_EQ(run_verify(p, o).report.dump(), run_verify(p, o).report.dump());
  EXPECT_EQ(run_verify(p, o).report["seed"], 7);
  EXPECT_EQ(run_simulate(p, o).report.dump(), run_simulate(p, o).report.dump());
}

TEST(Corpus, AllPass) {
  CommandResult r = run_corpus(corpus_files(corpus()), {});
  EXPECT_EQ(r.exit_code, kExitOk) << r.text;
  EXPECT_EQ(r.report["failed"], 0);
  for (const auto& row : r.report["rows"])
    EXPECT_FALSE(row["citation"].get<std::string>().empty()) << row["name"];
}

TEST(Corpus, MutationFailsEveryVerification) {
  RunOptions o;
  o.mutate = Mutation::V;
  CommandResult r = run_corpus(corpus_files(corpus()), o);
  EXPECT_EQ(r.exit_code, kExitRefuted);
  int verifications = 0;
  for (const auto& row : r.report["rows"]) {
    if (row["check"] != "verify")
      continue;
    ++verifications;
    EXPECT_EQ(row["computed"], "refuted") << row["name"];
  }
  EXPECT_GT(verifications, 5);
}

TEST(Corpus, Filter) {
  CommandResult r = run_corpus(corpus_files(corpus()), {}, "case0");
  std::set<std::string> names;
  for (const auto& row : r.report["rows"])
    names.insert(row["name"].get<std::string>());
  EXPECT_EQ(names, (std::set<std::string>{"rays", "skew_lines_euclid", "skew_lines_restricted"}));
}

TEST(Tool, ExitCodes) {
  std::string c = corpus().string() + "/";
  EXPECT_EQ(tool("classify " + c + "04_products_euclid.json"), 0);
  EXPECT_EQ(tool("verify " + c + "08_cubic_restricted.json"), 0);
  EXPECT_EQ(tool("verify " + c + "09_cubic_off_family.json"), 1);
  EXPECT_EQ(tool("verify " + c + "missing.json"), 2);
  EXPECT_EQ(tool("verify"), 2);
  EXPECT_EQ(tool("corpus --filter case0"), 0);
  EXPECT_EQ(tool("verify " + c + "08_cubic_restricted.json --mutate Q"), 2);
  auto json = std::filesystem::temp_directory_path() / "invdyn_test_report.json";
  EXPECT_EQ(tool("classify " + c + "04_products_euclid.json --json " + json.string()), 0);
  std::ifstream in(json);
  EXPECT_EQ(Json::parse(in)["classification"]["label"], "Case1a1");
  std::filesystem::remove(json);
}
