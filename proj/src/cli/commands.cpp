#include "invdyn/cli/commands.hpp"

#include <gmp.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <sstream>

#ifndef INVDYN_VERSION
#define INVDYN_VERSION "0.0.0"
#endif

namespace invdyn::cli {

namespace {

std::string pretty(CaseLabel l) {
  std::string s = to_string(l);
  return s.substr(0, 4) + " " + s.substr(4);
}

std::string fmt(double v) {
  std::ostringstream out;
  out << std::setprecision(3) << std::scientific << v;
  return out.str();
}

Json header(const std::string& command, const Problem* p, const RunOptions& o) {
  Json j;
  j["schema"] = kReportSchema;
  j["version"] = INVDYN_VERSION;
  j["gmp"] = gmp_version;
  j["command"] = command;
  if (p) {
    j["seed"] = effective_seed(*p, o);
    j["input"] = to_json(*p);
  } else if (o.seed) {
    j["seed"] = *o.seed;
  }
  if (o.mutate != Mutation::none)
    j["mutate"] = o.mutate == Mutation::V ? "V" : "E";
  return j;
}

void put(std::ostringstream& out, const std::string& key, const std::string& value) {
  out << std::left << std::setw(12) << key << value << '\n';
}

std::string problem_banner(const Problem& p) {
  std::ostringstream out;
  put(out, "problem", p.name);
  if (!p.citation.empty())
    put(out, "citation", p.citation);
  put(out, "phi", p.phi);
  put(out, "psi", p.psi);
  return out.str();
}

Json metric_json(const Metric& g) {
  Json e = Json::array();
  for (const RF& entry : g.entries())
    e.push_back(to_string(entry));
  return e;
}

std::string metric_text(const Metric& g) {
  std::string s = "[";
  std::array<RF, 6> e = g.entries();
  for (std::size_t k = 0; k < 6; ++k)
    s += (k ? ", " : "") + to_string(e[k]);
  return s + "]";
}

Json frame_json(const FrameDecomposition& f) {
  Json j;
  for (std::size_t k = 0; k < 3; ++k)
    j[f.names[k]] = to_string(f.coefficients[k]);
  return j;
}

Json classification_json(const ClassificationReport& r) {
  Json j;
  j["label"] = to_string(r.label);
  j["straight_line"] = r.straight_line;
  j["swapped"] = r.session.swapped;
  j["metric"] = metric_json(r.session.metric);
  if (r.case0_basis) {
    j["Z1"] = Json::array();
    j["Z2"] = Json::array();
    for (std::size_t i = 0; i < 3; ++i) {
      j["Z1"].push_back(to_string((*r.case0_basis)[0][i]));
      j["Z2"].push_back(to_string((*r.case0_basis)[1][i]));
    }
  }
  j["orthogonal_integrable"] = r.orthogonal_integrable;
  if (r.beta0_closed)
    j["beta0_closed"] = *r.beta0_closed;
  if (!r.straight_line)
    j["A"] = to_string(r.session.a);
  if (r.xz1)
    j["X_Z1"] = frame_json(*r.xz1);
  if (r.xz0_integrable)
    j["X_Z0_integrable"] = *r.xz0_integrable;
  if (r.xz0)
    j["X_Z0"] = frame_json(*r.xz0);
  if (r.z1z0)
    j["Z1_Z0"] = frame_json(*r.z1z0);
  if (r.B)
    j["B"] = to_string(*r.B);
  if (r.C)
    j["C"] = to_string(*r.C);
  if (r.F1)
    j["F1"] = to_string(*r.F1);
  if (r.F2)
    j["F2"] = to_string(*r.F2);
  if (r.G1)
    j["G1"] = to_string(*r.G1);
  if (r.G2)
    j["G2"] = to_string(*r.G2);
  j["notes"] = r.notes;
  return j;
}

Json residuals_json(const ResidualReport& r) {
  Json j;
  j["certified"] = r.certified;
  j["symbolic"] = r.symbolic;
  j["residuals"] = Json::array();
  for (const Residual& res : r.residuals) {
    Json e;
    e["name"] = res.name;
    e["status"] = to_string(res.status);
    if (res.samples > 0) {
      e["samples"] = res.samples;
      e["max_normalized"] = res.max_normalized;
      if (!res.witness.empty()) {
        e["witness"] = res.witness;
        e["witness_value"] = res.witness_value;
      }
    }
    j["residuals"].push_back(e);
  }
  if (r.h_squared)
    j["h_squared"] = *r.h_squared;
  if (r.h_squared_min) {
    j["h_squared_min"] = *r.h_squared_min;
    j["h_squared_max"] = *r.h_squared_max;
  }
  j["notes"] = r.notes;
  return j;
}

Json drift_json(const Drift& d) { return {{"phi", d.phi}, {"psi", d.psi}, {"energy", d.energy}}; }

Json simulation_json(const SimulationOutcome& s) {
  Json j;
  j["x0"] = s.launch.x0;
  j["direction"] = s.launch.direction_sign;
  j["h_squared"] = s.h_squared;
  j["steps"] = s.summary.steps;
  j["halted"] = s.coarse.halted;
  if (s.coarse.halted)
    j["halt_reason"] = s.coarse.halt_reason;
  j["drift"] = drift_json(s.coarse.drift);
  j["drift_half_step"] = drift_json(s.fine.drift);
  j["order_consistent"] = {{"phi", s.order_ok[0]}, {"psi", s.order_ok[1]}, {"energy", s.order_ok[2]}};
  if (s.summary.energy_match)
    j["energy_match"] = *s.summary.energy_match;
  j["within_tolerance"] = s.within_tolerance;
  j["conserved"] = s.conserved;
  return j;
}

Json search_json(const SearchOutcome& s) {
  Json j;
  j["conditions"] = Json::array();
  for (const Condition& c : s.system.conditions)
    j["conditions"].push_back({{"monomial", c.monomial}, {"condition", to_string(c.poly)}});
  j["removed_content"] = to_string(s.system.removed_content);
  j["candidates"] = Json::array();
  for (const MetricCandidate& m : s.candidates)
    j["candidates"].push_back(
        {{"entries", m.entries}, {"residual", m.residual}, {"dual_residual", m.dual_residual}, {"det", m.det}});
  j["certifications"] = Json::array();
  for (const Certification& c : s.certifications) {
    Json e;
    e["certified"] = c.certified;
    if (c.entries) {
      e["entries"] = Json::array();
      for (const mpq_class& q : *c.entries)
        e["entries"].push_back(q.get_str());
    }
    if (c.label)
      e["label"] = to_string(*c.label);
    if (!c.note.empty())
      e["note"] = c.note;
    j["certifications"].push_back(e);
  }
  if (s.metric) {
    j["metric"] = metric_json(*s.metric);
    j["label"] = to_string(*s.label);
  }
  return j;
}

CommandResult failure(Json report, std::string text, const std::exception& e) {
  CommandResult r;
  r.exit_code = exit_code_for(e);
  report["error"] = e.what();
  report["exit_code"] = r.exit_code;
  r.report = std::move(report);
  r.text = std::move(text) + "error: " + e.what() + "\n";
  return r;
}

CommandResult done(Json report, std::string text, int code) {
  report["exit_code"] = code;
  return {code, std::move(report), std::move(text)};
}

} // namespace

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const InputError*>(&e) || dynamic_cast<const ParseError*>(&e) ||
      dynamic_cast<const UndeclaredSymbol*>(&e) || dynamic_cast<const DegenerateData*>(&e) ||
      dynamic_cast<const SingularMetric*>(&e) || dynamic_cast<const NonRationalError*>(&e) ||
      dynamic_cast<const DifferentiationError*>(&e))
    return kExitInput;
  return kExitRefuted;
}

std::uint64_t effective_seed(const Problem& p, const RunOptions& o) { return o.seed.value_or(p.sampling.seed); }

SamplingOptions sampling_options(const Problem& p, const RunOptions& o) {
  SamplingOptions s;
  s.seed = effective_seed(p, o);
  s.points = o.points.value_or(p.sampling.points);
  s.lo = p.sampling.lo;
  s.hi = p.sampling.hi;
  s.tolerance = o.tol.value_or(p.sampling.tolerance);
  return s;
}

SearchOutcome search_metric(const Problem& p, const RunOptions& o) {
  CurveData d = curve_data(p);
  SearchOutcome out;
  out.system = extract_case1_conditions(d);
  SearchOptions opts;
  opts.restarts = p.search.restarts;
  opts.seed = effective_seed(p, o);
  out.candidates = solve_numeric(out.system, opts);
  std::size_t limit = std::min(out.candidates.size(), static_cast<std::size_t>(std::max(0, p.search.certify_limit)));
  for (std::size_t i = 0; i < limit; ++i) {
    Certification c = certify_candidate(d, out.candidates[i], out.system);
    if (c.certified && !out.metric) {
      std::array<RF, 6> e;
      for (std::size_t k = 0; k < 6; ++k)
        e[k] = RF((*c.entries)[k]);
      out.metric = Metric(e);
      out.label = c.label;
    }
    out.certifications.push_back(std::move(c));
  }
  return out;
}

Metric resolve_metric(const Problem& p, const RunOptions& o) {
  if (p.metric.mode != MetricMode::search)
    return metric_of(p);
  SearchOutcome s = search_metric(p, o);
  if (!s.metric)
    throw CaseMismatch("metric search certified no candidate");
  return *s.metric;
}

SimulationOutcome simulate(const Problem& p, const RunOptions& o, const Metric& g) {
  Metric gn = instantiate_metric(p, g);
  if (!gn.is_numeric())
    throw InputError("simulation needs a numeric metric: give values for its parameters under 'parameters'");
  Session s = Session::build(curve_data(p), gn);
  CandidateSolution c = candidate_of(p);
  CandidateSolution moved = candidate_of(p, o.mutate);
  NumericPoint params = numeric_parameters(p);
  double T = o.T.value_or(p.integrator.T);
  double dt = o.dt.value_or(p.integrator.dt);

  SimulationOutcome out;
  if (p.integrator.x0)
    out.launch = {*p.integrator.x0, p.integrator.direction};
  else
    out.launch = find_launch_point(s, c, params, effective_seed(p, o), T, dt);
  LaunchResult l = launch(s, c, out.launch.x0, out.launch.direction_sign, params);
  out.h_squared = l.h_squared;
  SecondOrderSystem sys = SecondOrderSystem::build(s, moved.V, params);
  out.coarse = integrate(sys, l.state, T, dt);
  out.fine = integrate(sys, l.state, T, dt / 2);
  out.summary = conservation_report(out.coarse, s, moved.energy, params);
  const Drift& a = out.coarse.drift;
  const Drift& b = out.fine.drift;
  out.order_ok = {order_consistent(a.phi, b.phi), order_consistent(a.psi, b.psi),
                  order_consistent(a.energy, b.energy)};
  double tol = p.integrator.drift_tolerance;
  out.within_tolerance = a.phi < tol && a.psi < tol && a.energy < tol;
  out.conserved = !out.coarse.halted && !out.fine.halted && out.within_tolerance && out.order_ok[0] &&
                  out.order_ok[1] && out.order_ok[2];
  return out;
}

bool energy_compatible(const Problem& p, const Metric& g, Mutation m) {
  CandidateSolution c = candidate_of(p, m);
  if (!c.energy)
    throw InputError(p.name + ": energy compatibility needs candidate.E");
  ClassificationReport r = classify(curve_data(p), g);
  for (const Expr& e : energy_conditions(r, *c.energy)) {
    std::optional<RF> f = bind_metric_parameters(r.session.metric, e).as_rational();
    if (!f)
      throw NonRationalError("energy condition is not rational");
    if (!f->is_zero())
      return false;
  }
  return true;
}

CommandResult run_classify(const Problem& p, const RunOptions& o) {
  Json report = header("classify", &p, o);
  std::string text = problem_banner(p);
  try {
    ClassificationReport r = classify(curve_data(p), resolve_metric(p, o));
    report["classification"] = classification_json(r);
    std::ostringstream out;
    put(out, "metric", metric_text(r.session.metric));
    put(out, "case", pretty(r.label));
    for (const auto& n : r.notes)
      put(out, "note", n);
    return done(std::move(report), text + out.str(), kExitOk);
  } catch (const std::exception& e) {
    return failure(std::move(report), text, e);
  }
}

CommandResult run_verify(const Problem& p, const RunOptions& o) {
  Json report = header("verify", &p, o);
  std::string text = problem_banner(p);
  try {
    Session s = Session::build(curve_data(p), resolve_metric(p, o));
    ResidualReport r = verify(s, candidate_of(p, o.mutate), sampling_options(p, o));
    report["verification"] = residuals_json(r);
    std::ostringstream out;
    put(out, "metric", metric_text(s.metric));
    put(out, "verdict", std::string(r.certified ? "certified" : "refuted") + (r.symbolic ? " (symbolic)" : " (sampled)"));
    for (const Residual& res : r.residuals) {
      std::string v = to_string(res.status);
      if (res.samples > 0)
        v += "  max " + fmt(res.max_normalized) + " over " + std::to_string(res.samples) + " points";
      out << "  " << std::left << std::setw(16) << res.name << v << '\n';
    }
    if (r.h_squared)
      put(out, "h^2", *r.h_squared);
    for (const auto& n : r.notes)
      put(out, "note", n);
    return done(std::move(report), text + out.str(), r.certified ? kExitOk : kExitRefuted);
  } catch (const std::exception& e) {
    return failure(std::move(report), text, e);
  }
}

CommandResult run_simulate(const Problem& p, const RunOptions& o) {
  Json report = header("simulate", &p, o);
  std::string text = problem_banner(p);
  try {
    SimulationOutcome s = simulate(p, o, resolve_metric(p, o));
    report["simulation"] = simulation_json(s);
    if (!o.csv_path.empty()) {
      std::ofstream csv(o.csv_path);
      if (!csv)
        throw InputError("cannot write " + o.csv_path);
      write_csv(csv, s.coarse);
    }
    std::ostringstream out;
    const Vec3& x = s.launch.x0;
    put(out, "launch", "(" + std::to_string(x[0]) + ", " + std::to_string(x[1]) + ", " + std::to_string(x[2]) +
                           ") direction " + std::to_string(s.launch.direction_sign));
    put(out, "steps", std::to_string(s.summary.steps) + (s.coarse.halted ? " (halted: " + s.coarse.halt_reason + ")" : ""));
    put(out, "drift", "phi " + fmt(s.coarse.drift.phi) + "  psi " + fmt(s.coarse.drift.psi) + "  E " +
                          fmt(s.coarse.drift.energy));
    put(out, "half step", "phi " + fmt(s.fine.drift.phi) + "  psi " + fmt(s.fine.drift.psi) + "  E " +
                              fmt(s.fine.drift.energy));
    if (s.summary.energy_match)
      put(out, "E match", fmt(*s.summary.energy_match));
    put(out, "verdict", s.conserved ? "conserved" : "not conserved");
    return done(std::move(report), text + out.str(), s.conserved ? kExitOk : kExitRefuted);
  } catch (const std::exception& e) {
    return failure(std::move(report), text, e);
  }
}

CommandResult run_search(const Problem& p, const RunOptions& o) {
  Json report = header("search", &p, o);
  std::string text = problem_banner(p);
  try {
    SearchOutcome s = search_metric(p, o);
    report["search"] = search_json(s);
    std::ostringstream out;
    for (const Condition& c : s.system.conditions)
      put(out, "condition", to_string(c.poly) + " = 0");
    put(out, "candidates", std::to_string(s.candidates.size()));
    if (s.metric)
      put(out, "certified", metric_text(*s.metric) + "  " + pretty(*s.label));
    else
      put(out, "certified", "none");
    return done(std::move(report), text + out.str(), s.metric ? kExitOk : kExitRefuted);
  } catch (const std::exception& e) {
    return failure(std::move(report), text, e);
  }
}

std::vector<std::filesystem::path> corpus_files(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> files;
  std::error_code ec;
  for (const auto& entry : std::filesystem::directory_iterator(dir, ec))
    if (entry.is_regular_file() && entry.path().extension() == ".json")
      files.push_back(entry.path());
  if (ec)
    throw InputError(dir.string() + ": " + ec.message());
  std::sort(files.begin(), files.end());
  return files;
}

namespace {

struct Row {
  std::string file;
  std::string name;
  std::string citation;
  std::string check;
  std::string expected;
  std::string computed;
  bool pass = false;
};

std::string labels_text(const std::vector<CaseLabel>& ls) {
  std::string s;
  for (std::size_t i = 0; i < ls.size(); ++i)
    s += (i ? " | " : "") + std::string(to_string(ls[i]));
  return s;
}

template <class F>
void check(std::vector<Row>& rows, const Row& base, const std::string& name, const std::string& expected, F&& compute,
           const std::function<bool(const std::string&)>& matches) {
  Row r = base;
  r.check = name;
  r.expected = expected;
  try {
    r.computed = compute();
    r.pass = matches(r.computed);
  } catch (const std::exception& e) {
    r.computed = std::string("error: ") + e.what();
  }
  rows.push_back(std::move(r));
}

std::string yes_no(bool b, const char* yes, const char* no) { return b ? yes : no; }

} // namespace

CommandResult run_corpus(const std::vector<std::filesystem::path>& files, const RunOptions& o,
                         const std::string& filter) {
  Json report = header("corpus", nullptr, o);
  if (!filter.empty())
    report["filter"] = filter;
  std::vector<Row> rows;
  bool input_error = false;
  for (const auto& path : files) {
    Problem p;
    Row base;
    base.file = path.filename().string();
    try {
      p = load_problem(path);
    } catch (const std::exception& e) {
      base.check = "load";
      base.computed = e.what();
      rows.push_back(base);
      input_error = true;
      continue;
    }
    if (!filter.empty() && !p.has_tag(filter))
      continue;
    base.name = p.name;
    base.citation = p.citation;
    const Expectation& ex = p.expect;
    std::optional<Metric> metric;
    auto g = [&]() -> const Metric& {
      if (!metric)
        metric = resolve_metric(p, o);
      return *metric;
    };
    auto equals = [](std::string want) { return [want](const std::string& got) { return got == want; }; };
    if (!ex.labels.empty()) {
      check(
          rows, base, "classify", labels_text(ex.labels),
          [&] { return std::string(to_string(classify(curve_data(p), g()).label)); },
          [&](const std::string& got) {
            return std::any_of(ex.labels.begin(), ex.labels.end(), [&](CaseLabel l) { return got == to_string(l); });
          });
    }
    if (ex.certified) {
      check(
          rows, base, "verify", yes_no(*ex.certified, "certified", "refuted"),
          [&] {
            Session s = Session::build(curve_data(p), g());
            return yes_no(verify(s, candidate_of(p, o.mutate), sampling_options(p, o)).certified, "certified",
                          "refuted");
          },
          equals(yes_no(*ex.certified, "certified", "refuted")));
    }
    if (ex.energy_compatible) {
      check(
          rows, base, "energy", yes_no(*ex.energy_compatible, "compatible", "incompatible"),
          [&] { return yes_no(energy_compatible(p, g(), o.mutate), "compatible", "incompatible"); },
          equals(yes_no(*ex.energy_compatible, "compatible", "incompatible")));
    }
    if (ex.search_certified) {
      std::string want = *ex.search_certified ? (ex.search_label ? to_string(*ex.search_label) : "certified") : "none";
      check(
          rows, base, "search", want,
          [&] {
            SearchOutcome s = search_metric(p, o);
            if (!s.metric)
              return std::string("none");
            return ex.search_label ? std::string(to_string(*s.label)) : std::string("certified");
          },
          equals(want));
    }
    if (ex.conserved) {
      check(
          rows, base, "dynamics", yes_no(*ex.conserved, "conserved", "not conserved"),
          [&] {
            SimulationOutcome s = simulate(p, o, g());
            return yes_no(s.conserved, "conserved", "not conserved");
          },
          equals(yes_no(*ex.conserved, "conserved", "not conserved")));
    }
  }

  std::size_t passed = 0;
  Json jrows = Json::array();
  std::ostringstream out;
  out << std::left << std::setw(30) << "problem" << std::setw(10) << "check" << std::setw(26) << "expected"
      << std::setw(26) << "computed" << "result\n";
  for (const Row& r : rows) {
    passed += r.pass ? 1 : 0;
    jrows.push_back({{"file", r.file},
                     {"name", r.name},
                     {"citation", r.citation},
                     {"check", r.check},
                     {"expected", r.expected},
                     {"computed", r.computed},
                     {"pass", r.pass}});
    out << std::left << std::setw(30) << (r.name.empty() ? r.file : r.name) << std::setw(10) << r.check
        << std::setw(26) << r.expected << std::setw(26) << r.computed << (r.pass ? "pass" : "FAIL") << '\n';
  }
  out << passed << " of " << rows.size() << " checks passed\n";
  report["rows"] = jrows;
  report["passed"] = passed;
  report["failed"] = rows.size() - passed;
  int code = input_error ? kExitInput : (passed == rows.size() ? kExitOk : kExitRefuted);
  return done(std::move(report), out.str(), code);
}

} // namespace invdyn::cli
