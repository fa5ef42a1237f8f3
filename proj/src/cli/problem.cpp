#include "invdyn/cli/problem.hpp"

#include "invdyn/kernel/parser.hpp"

#include <fstream>

namespace invdyn::cli {

namespace {

constexpr std::array<const char*, 6> kEntryNames{"g11", "g12", "g13", "g22", "g23", "g33"};

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw InputError(where + ": " + what);
}

void allow_keys(const Json& j, const std::string& where, std::initializer_list<std::string_view> keys) {
  if (!j.is_object())
    fail(where, "expected an object");
  for (const auto& [key, value] : j.items())
    if (std::find(keys.begin(), keys.end(), key) == keys.end())
      fail(where, "unknown key '" + key + "'");
}

std::string get_string(const Json& j, const std::string& where) {
  if (!j.is_string())
    fail(where, "expected a string");
  return j.get<std::string>();
}

double get_number(const Json& j, const std::string& where) {
  if (!j.is_number())
    fail(where, "expected a number");
  return j.get<double>();
}

int get_int(const Json& j, const std::string& where) {
  if (!j.is_number_integer())
    fail(where, "expected an integer");
  return j.get<int>();
}

bool get_bool(const Json& j, const std::string& where) {
  if (!j.is_boolean())
    fail(where, "expected true or false");
  return j.get<bool>();
}

std::vector<std::string> get_strings(const Json& j, const std::string& where) {
  if (!j.is_array())
    fail(where, "expected an array of strings");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(get_string(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

/// Exact rational from "3/4", "-2", "0.75" or a JSON number.
mpq_class get_rational(const Json& j, const std::string& where) {
  std::string text;
  if (j.is_string())
    text = j.get<std::string>();
  else if (j.is_number())
    text = j.dump();
  else
    fail(where, "expected a rational number");
  try {
    std::optional<RationalFunction> f = parse_canonical(text, SymbolTable()).as_rational();
    if (f && f->is_constant())
      return f->constant_value();
  } catch (const Error&) {
  }
  fail(where, "'" + text + "' is not a rational number");
}

CaseLabel get_label(const Json& j, const std::string& where) {
  std::string text = get_string(j, where);
  std::optional<CaseLabel> l = parse_case_label(text);
  if (!l)
    fail(where, "unknown case label '" + text + "'");
  return *l;
}

MetricSpec parse_metric(const Json& j) {
  allow_keys(j, "metric", {"mode", "entries", "overrides"});
  if (!j.contains("mode"))
    fail("metric", "missing 'mode'");
  std::string mode = get_string(j["mode"], "metric.mode");
  MetricSpec m;
  if (mode == "euclidean") {
    m.mode = MetricMode::euclidean;
  } else if (mode == "explicit") {
    m.mode = MetricMode::explicit_entries;
    if (!j.contains("entries") || !j["entries"].is_array() || j["entries"].size() != 6)
      fail("metric.entries", "explicit mode needs 6 entries g11, g12, g13, g22, g23, g33");
    for (std::size_t k = 0; k < 6; ++k)
      m.entries[k] = get_rational(j["entries"][k], "metric.entries[" + std::to_string(k) + "]").get_str();
  } else if (mode == "symbolic") {
    m.mode = MetricMode::symbolic;
  } else if (mode == "search") {
    m.mode = MetricMode::search;
  } else {
    fail("metric.mode", "expected euclidean, explicit, symbolic or search");
  }
  if (j.contains("entries") && m.mode != MetricMode::explicit_entries)
    fail("metric.entries", "only allowed in explicit mode");
  if (j.contains("overrides")) {
    if (m.mode != MetricMode::symbolic)
      fail("metric.overrides", "only allowed in symbolic mode");
    allow_keys(j["overrides"], "metric.overrides", {"g11", "g12", "g13", "g22", "g23", "g33"});
    for (const auto& [key, value] : j["overrides"].items())
      m.overrides[key] = get_string(value, "metric.overrides." + key);
  }
  return m;
}

Expectation parse_expect(const Json& j) {
  allow_keys(j, "expect", {"label", "certified", "energy_compatible", "search", "conserved"});
  Expectation e;
  if (j.contains("label")) {
    if (j["label"].is_array()) {
      for (std::size_t i = 0; i < j["label"].size(); ++i)
        e.labels.push_back(get_label(j["label"][i], "expect.label[" + std::to_string(i) + "]"));
    } else {
      e.labels.push_back(get_label(j["label"], "expect.label"));
    }
  }
  if (j.contains("certified"))
    e.certified = get_bool(j["certified"], "expect.certified");
  if (j.contains("energy_compatible"))
    e.energy_compatible = get_bool(j["energy_compatible"], "expect.energy_compatible");
  if (j.contains("search")) {
    allow_keys(j["search"], "expect.search", {"certified", "label"});
    if (!j["search"].contains("certified"))
      fail("expect.search", "missing 'certified'");
    e.search_certified = get_bool(j["search"]["certified"], "expect.search.certified");
    if (j["search"].contains("label"))
      e.search_label = get_label(j["search"]["label"], "expect.search.label");
  }
  if (j.contains("conserved"))
    e.conserved = get_bool(j["conserved"], "expect.conserved");
  return e;
}

Json label_json(CaseLabel l) { return to_string(l); }

} // namespace

bool Problem::has_tag(std::string_view tag) const {
  return std::find(tags.begin(), tags.end(), tag) != tags.end();
}

const char* to_string(MetricMode m) {
  switch (m) {
  case MetricMode::euclidean: return "euclidean";
  case MetricMode::explicit_entries: return "explicit";
  case MetricMode::symbolic: return "symbolic";
  case MetricMode::search: return "search";
  }
  return "?";
}

Problem parse_problem(const Json& j) {
  allow_keys(j, "problem", {"format", "name", "citation", "tags", "constants", "phi", "psi", "metric", "candidate",
                            "parameters", "sampling", "integrator", "search", "expect"});
  Problem p;
  if (j.contains("format") && get_int(j["format"], "format") != kFormatVersion)
    fail("format", "unsupported version (expected " + std::to_string(kFormatVersion) + ")");
  for (const char* key : {"name", "phi", "psi"})
    if (!j.contains(key))
      fail("problem", std::string("missing '") + key + "'");
  p.name = get_string(j["name"], "name");
  p.phi = get_string(j["phi"], "phi");
  p.psi = get_string(j["psi"], "psi");
  if (j.contains("citation"))
    p.citation = get_string(j["citation"], "citation");
  if (j.contains("tags"))
    p.tags = get_strings(j["tags"], "tags");
  if (j.contains("constants")) {
    p.constants = get_strings(j["constants"], "constants");
    for (const auto& c : p.constants)
      if (!is_identifier(c) || kind_of_name(c) != SymbolKind::free_constant || c == "ln" || c == "exp")
        fail("constants", "'" + c + "' cannot be declared as a constant");
  }
  if (j.contains("metric"))
    p.metric = parse_metric(j["metric"]);
  if (j.contains("candidate")) {
    const Json& c = j["candidate"];
    allow_keys(c, "candidate", {"V", "E"});
    if (!c.contains("V"))
      fail("candidate", "missing 'V'");
    p.candidate = CandidateSpec{get_string(c["V"], "candidate.V"), std::nullopt};
    if (c.contains("E"))
      p.candidate->E = get_string(c["E"], "candidate.E");
  }
  if (j.contains("parameters")) {
    if (!j["parameters"].is_object())
      fail("parameters", "expected an object");
    for (const auto& [key, value] : j["parameters"].items()) {
      bool declared = std::find(p.constants.begin(), p.constants.end(), key) != p.constants.end();
      if (!declared && kind_of_name(key) != SymbolKind::metric_parameter)
        fail("parameters." + key, "not a declared constant or metric parameter");
      p.parameters[key] = get_rational(value, "parameters." + key);
    }
  }
  if (j.contains("sampling")) {
    const Json& s = j["sampling"];
    allow_keys(s, "sampling", {"seed", "points", "box", "tolerance"});
    if (s.contains("seed")) {
      if (!s["seed"].is_number_unsigned())
        fail("sampling.seed", "expected a non-negative integer");
      p.sampling.seed = s["seed"].get<std::uint64_t>();
    }
    if (s.contains("points"))
      p.sampling.points = get_int(s["points"], "sampling.points");
    if (s.contains("box")) {
      if (!s["box"].is_array() || s["box"].size() != 2)
        fail("sampling.box", "expected [lo, hi]");
      p.sampling.lo = get_number(s["box"][0], "sampling.box[0]");
      p.sampling.hi = get_number(s["box"][1], "sampling.box[1]");
    }
    if (s.contains("tolerance"))
      p.sampling.tolerance = get_number(s["tolerance"], "sampling.tolerance");
    if (p.sampling.points <= 0)
      fail("sampling.points", "must be positive");
    if (!(0 < p.sampling.lo && p.sampling.lo < p.sampling.hi))
      fail("sampling.box", "need 0 < lo < hi");
  }
  if (j.contains("integrator")) {
    const Json& s = j["integrator"];
    allow_keys(s, "integrator", {"T", "dt", "x0", "direction", "drift_tolerance"});
    if (s.contains("T"))
      p.integrator.T = get_number(s["T"], "integrator.T");
    if (s.contains("dt"))
      p.integrator.dt = get_number(s["dt"], "integrator.dt");
    if (s.contains("x0")) {
      if (!s["x0"].is_array() || s["x0"].size() != 3)
        fail("integrator.x0", "expected [x, y, z]");
      Vec3 x{};
      for (std::size_t k = 0; k < 3; ++k)
        x[k] = get_number(s["x0"][k], "integrator.x0[" + std::to_string(k) + "]");
      p.integrator.x0 = x;
    }
    if (s.contains("direction")) {
      p.integrator.direction = get_int(s["direction"], "integrator.direction");
      if (p.integrator.direction != 1 && p.integrator.direction != -1)
        fail("integrator.direction", "expected 1 or -1");
    }
    if (s.contains("drift_tolerance"))
      p.integrator.drift_tolerance = get_number(s["drift_tolerance"], "integrator.drift_tolerance");
  }
  if (j.contains("search")) {
    const Json& s = j["search"];
    allow_keys(s, "search", {"restarts", "certify_limit"});
    if (s.contains("restarts"))
      p.search.restarts = get_int(s["restarts"], "search.restarts");
    if (s.contains("certify_limit"))
      p.search.certify_limit = get_int(s["certify_limit"], "search.certify_limit");
  }
  if (j.contains("expect"))
    p.expect = parse_expect(j["expect"]);

  // Expressions are checked here so that errors surface at load time.
  SymbolTable t = symbol_table(p);
  auto check = [&](const std::string& where, const std::string& text) {
    try {
      parse(text, t);
    } catch (const Error& e) {
      fail(where, e.what());
    }
  };
  check("phi", p.phi);
  check("psi", p.psi);
  for (const auto& [key, value] : p.metric.overrides)
    check("metric.overrides." + key, value);
  if (p.candidate) {
    check("candidate.V", p.candidate->V);
    if (p.candidate->E)
      check("candidate.E", *p.candidate->E);
  }
  return p;
}

Problem load_problem(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw InputError(path.string() + ": cannot open file");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InputError(path.string() + ": " + e.what());
  }
  try {
    return parse_problem(j);
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

Json to_json(const Problem& p) {
  Json j;
  j["format"] = kFormatVersion;
  j["name"] = p.name;
  j["citation"] = p.citation;
  j["tags"] = p.tags;
  j["constants"] = p.constants;
  j["phi"] = p.phi;
  j["psi"] = p.psi;
  Json m;
  m["mode"] = to_string(p.metric.mode);
  if (p.metric.mode == MetricMode::explicit_entries)
    m["entries"] = p.metric.entries;
  if (!p.metric.overrides.empty())
    m["overrides"] = p.metric.overrides;
  j["metric"] = m;
  if (p.candidate) {
    j["candidate"]["V"] = p.candidate->V;
    if (p.candidate->E)
      j["candidate"]["E"] = *p.candidate->E;
  }
  if (!p.parameters.empty()) {
    Json params = Json::object();
    for (const auto& [key, value] : p.parameters)
      params[key] = value.get_str();
    j["parameters"] = params;
  }
  j["sampling"] = {{"seed", p.sampling.seed},
                   {"points", p.sampling.points},
                   {"box", {p.sampling.lo, p.sampling.hi}},
                   {"tolerance", p.sampling.tolerance}};
  j["integrator"] = {{"T", p.integrator.T},
                     {"dt", p.integrator.dt},
                     {"direction", p.integrator.direction},
                     {"drift_tolerance", p.integrator.drift_tolerance}};
  if (p.integrator.x0)
    j["integrator"]["x0"] = *p.integrator.x0;
  j["search"] = {{"restarts", p.search.restarts}, {"certify_limit", p.search.certify_limit}};
  if (!p.expect.empty()) {
    Json e;
    if (!p.expect.labels.empty()) {
      Json labels = Json::array();
      for (CaseLabel l : p.expect.labels)
        labels.push_back(label_json(l));
      e["label"] = labels;
    }
    if (p.expect.certified)
      e["certified"] = *p.expect.certified;
    if (p.expect.energy_compatible)
      e["energy_compatible"] = *p.expect.energy_compatible;
    if (p.expect.search_certified) {
      e["search"]["certified"] = *p.expect.search_certified;
      if (p.expect.search_label)
        e["search"]["label"] = label_json(*p.expect.search_label);
    }
    if (p.expect.conserved)
      e["conserved"] = *p.expect.conserved;
    j["expect"] = e;
  }
  return j;
}

SymbolTable symbol_table(const Problem& p) {
  SymbolTable t = SymbolTable::with_formal_arguments();
  for (const auto& c : p.constants)
    t.declare(c);
  return t;
}

CurveData curve_data(const Problem& p) {
  SymbolTable t = symbol_table(p);
  return CurveData::make(parse_canonical(p.phi, t), parse_canonical(p.psi, t));
}

Metric metric_of(const Problem& p) {
  switch (p.metric.mode) {
  case MetricMode::euclidean: return Metric::euclidean();
  case MetricMode::explicit_entries: {
    std::array<RF, 6> e;
    for (std::size_t k = 0; k < 6; ++k)
      e[k] = RF(mpq_class(p.metric.entries[k]));
    return Metric(e);
  }
  case MetricMode::symbolic: {
    SymbolTable t = symbol_table(p);
    std::map<Symbol, RF> overrides;
    for (const auto& [key, value] : p.metric.overrides) {
      try {
        overrides.emplace(Symbol::intern(key), parse_canonical(value, t).to_rational());
      } catch (const Error& e) {
        fail("metric.overrides." + key, e.what());
      }
    }
    return Metric::symbolic_with(overrides);
  }
  case MetricMode::search: break;
  }
  throw InputError("metric: search mode has no fixed metric");
}

Mutation parse_mutation(std::string_view field) {
  if (field == "V")
    return Mutation::V;
  if (field == "E")
    return Mutation::E;
  throw InputError("--mutate: expected V or E, got '" + std::string(field) + "'");
}

CandidateSolution candidate_of(const Problem& p, Mutation m) {
  if (!p.candidate)
    throw InputError(p.name + ": no candidate given");
  SymbolTable t = symbol_table(p);
  CandidateSolution c{parse_canonical(p.candidate->V, t), std::nullopt};
  if (p.candidate->E)
    c.energy = parse_canonical(*p.candidate->E, t);
  if (m == Mutation::V)
    c.V = c.V + Expr(sym::x());
  if (m == Mutation::E && c.energy)
    c.energy = *c.energy + Expr(sym::phi());
  return c;
}

Metric instantiate_metric(const Problem& p, const Metric& g) {
  Assignment values;
  for (const auto& [key, value] : p.parameters)
    if (kind_of_name(key) == SymbolKind::metric_parameter)
      values[Symbol::intern(key)] = value;
  return values.empty() ? g : g.instantiate(values);
}

NumericPoint numeric_parameters(const Problem& p) {
  std::map<std::string, double> values;
  for (const auto& [key, value] : p.parameters)
    if (kind_of_name(key) == SymbolKind::free_constant)
      values[key] = value.get_d();
  return make_parameters(values);
}

} // namespace invdyn::cli
