#include "invdyn/classifier/classifier.hpp"

#include <algorithm>

namespace invdyn {

namespace {

constexpr std::array<const char*, 7> kLabelNames{"Case0a", "Case0b", "Case1a1", "Case1a2", "Case2a", "Case2b", "Case2c"};
constexpr std::array<const char*, kEnergySlots> kSlotNames{"E", "X(E)", "X(X(E))", "Z1(E)", "Z1(X(E))"};

bool minors_vanish(const VectorField& a, const VectorField& b) { return cross(a, b).is_zero(); }

bool dual_integrable(const Metric& g, const VectorField& z0) {
  OneForm a0 = alpha0(g, z0);
  return d_wedge(a0, a0).is_zero();
}

void check_dual(const ClassificationReport& r, bool bracket_result) {
  bool dual = dual_integrable(r.session.metric, r.session.z0);
  if (dual != bracket_result)
    throw Error("bracket and dual-form integrability tests disagree");
}

void beta0_closed(ClassificationReport& r) {
  if (!r.orthogonal_integrable)
    return;
  if (r.session.g00.is_zero()) {
    r.notes.push_back("Z0 is null for g: beta0 checks skipped");
    return;
  }
  OneForm a0 = alpha0(r.session.metric, r.session.z0);
  OneForm b0 = beta0(r.session.metric, r.session.z0);
  r.beta0_closed = d_wedge(b0, a0).is_zero();
  if (!*r.beta0_closed)
    throw TheoremViolation("d(beta0) ^ alpha0 != 0 although d(alpha0) ^ alpha0 == 0");
}

// Energy composed with the data and its slot derivatives, rational when possible.
struct SlotValues {
  std::array<std::optional<Expr>, kEnergySlots> expr;
};

SlotValues slot_values(const Session& s, const Expr& energy, const std::array<bool, kEnergySlots>& needed) {
  SlotValues out;
  Expr e = compose_energy(s, energy);
  auto want = [&](EnergySlot slot) { return needed[static_cast<std::size_t>(slot)]; };
  auto put = [&](EnergySlot slot, Expr v) { out.expr[static_cast<std::size_t>(slot)] = std::move(v); };
  if (auto er = e.as_rational()) {
    put(EnergySlot::E, Expr(*er));
    if (want(EnergySlot::Z1E))
      put(EnergySlot::Z1E, Expr(s.z1(*er)));
    if (want(EnergySlot::XE) || want(EnergySlot::X2E) || want(EnergySlot::Z1XE)) {
      RF xe = s.x(*er);
      put(EnergySlot::XE, Expr(xe));
      if (want(EnergySlot::X2E))
        put(EnergySlot::X2E, Expr(s.x(xe)));
      if (want(EnergySlot::Z1XE))
        put(EnergySlot::Z1XE, Expr(s.z1(xe)));
    }
    return out;
  }
  put(EnergySlot::E, e);
  if (want(EnergySlot::Z1E))
    put(EnergySlot::Z1E, s.z1(e));
  if (want(EnergySlot::XE) || want(EnergySlot::X2E) || want(EnergySlot::Z1XE)) {
    Expr xe = s.x(e);
    put(EnergySlot::XE, xe);
    if (want(EnergySlot::X2E))
      put(EnergySlot::X2E, s.x(xe));
    if (want(EnergySlot::Z1XE))
      put(EnergySlot::Z1XE, s.z1(xe));
  }
  return out;
}

void require_case2(const ClassificationReport& r) {
  if (!is_case2(r.label))
    throw CaseMismatch(std::string("operation requires a case-2 report, got ") + to_string(r.label));
}

} // namespace

const char* to_string(CaseLabel label) { return kLabelNames[static_cast<std::size_t>(label)]; }

std::optional<CaseLabel> parse_case_label(std::string_view text) {
  for (std::size_t i = 0; i < kLabelNames.size(); ++i)
    if (text == kLabelNames[i])
      return static_cast<CaseLabel>(i);
  return std::nullopt;
}

bool is_case0(CaseLabel l) { return l == CaseLabel::Case0a || l == CaseLabel::Case0b; }
bool is_case1(CaseLabel l) { return l == CaseLabel::Case1a1 || l == CaseLabel::Case1a2; }
bool is_case2(CaseLabel l) { return l == CaseLabel::Case2a || l == CaseLabel::Case2b || l == CaseLabel::Case2c; }

const char* to_string(EnergySlot slot) { return kSlotNames[static_cast<std::size_t>(slot)]; }

Expr compose_energy(const Session& s, const Expr& energy) {
  const Expr& phi = s.swapped ? s.data.psi : s.data.phi;
  const Expr& psi = s.swapped ? s.data.phi : s.data.psi;
  return energy.substitute({{sym::phi(), phi}, {sym::psi(), psi}});
}

Expr EnergyOperator::apply(const Session& s, const Expr& energy) const {
  std::array<bool, kEnergySlots> needed{};
  for (std::size_t i = 0; i < kEnergySlots; ++i)
    needed[i] = !coefficients[i].is_zero();
  SlotValues v = slot_values(s, energy, needed);
  bool rational = true;
  for (std::size_t i = 0; i < kEnergySlots; ++i)
    if (needed[i] && !v.expr[i]->as_rational())
      rational = false;
  if (rational) {
    RF sum;
    for (std::size_t i = 0; i < kEnergySlots; ++i)
      if (needed[i])
        sum += coefficients[i] * *v.expr[i]->as_rational();
    return Expr(sum);
  }
  std::vector<Expr> terms;
  for (std::size_t i = 0; i < kEnergySlots; ++i)
    if (needed[i])
      terms.push_back(Expr(coefficients[i]) * *v.expr[i]);
  return Expr::add(std::move(terms));
}

EnergyOperator operator-(const EnergyOperator& a, const EnergyOperator& b) {
  EnergyOperator out;
  for (std::size_t i = 0; i < kEnergySlots; ++i)
    out.coefficients[i] = a.coefficients[i] - b.coefficients[i];
  return out;
}

EnergyOperator operator*(const RF& k, const EnergyOperator& op) {
  EnergyOperator out;
  for (std::size_t i = 0; i < kEnergySlots; ++i)
    out.coefficients[i] = k * op.coefficients[i];
  return out;
}

std::string to_string(const EnergyOperator& op) {
  std::string out;
  for (std::size_t i = 0; i < kEnergySlots; ++i) {
    if (op.coefficients[i].is_zero())
      continue;
    if (!out.empty())
      out += " + ";
    out += "(" + to_string(op.coefficients[i]) + ")*" + kSlotNames[i];
  }
  return out.empty() ? "0" : out;
}

bool is_straight_line_family(const CurveData& data, const Metric& g) {
  Session s = Session::build(data, g);
  return minors_vanish(s.dz, s.z0);
}

Case0Result case0_subcase(const CurveData& data, const Metric& g) {
  Session s = Session::build(data, g);
  if (!s.straight_line)
    throw CaseMismatch("case-0 subcase requested for data that are not straight lines");
  std::array<VectorField, 2> basis{rescale_primitive(s.z1).field, rescale_primitive(s.z2).field};
  bool integrable = integrability_test(basis[0], basis[1]);
  return {integrable ? CaseLabel::Case0a : CaseLabel::Case0b, basis};
}

ClassificationReport classify(const CurveData& data, const Metric& g) {
  ClassificationReport r(Session::build(data, g));
  const Session& s = r.session;
  r.notes = s.notes;
  r.straight_line = s.straight_line;
  if (r.straight_line != minors_vanish(s.dz, s.z0))
    throw Error("straight-line tests disagree");

  if (s.straight_line) {
    Case0Result c0 = case0_subcase(data, g);
    r.label = c0.label;
    r.case0_basis = c0.basis;
    r.orthogonal_integrable = c0.label == CaseLabel::Case0a;
    check_dual(r, r.orthogonal_integrable);
    beta0_closed(r);
    return r;
  }

  r.xz1 = frame_decompose(lie_bracket(s.x, s.z1), {s.x, s.z1, s.z0}, {"X", "Z1", "Z0"});
  const RF& b = r.xz1->coefficients[1];
  const RF& c = r.xz1->coefficients[2];
  r.orthogonal_integrable = c.is_zero();
  check_dual(r, r.orthogonal_integrable);
  beta0_closed(r);

  RF xa = s.x(s.a);
  if (r.orthogonal_integrable) {
    if (!(xa + b * s.a).is_zero())
      throw TheoremViolation("span{X, Z1} is integrable but X(A) + b A = " + to_string(xa + b * s.a));
    r.xz0_integrable = integrability_test(s.x, s.z0);
    r.label = *r.xz0_integrable ? CaseLabel::Case1a1 : CaseLabel::Case1a2;
    return r;
  }

  r.xz0 = frame_decompose(lie_bracket(s.x, s.z0), {s.x, s.z1, s.z0}, {"X", "Z1", "Z0"});
  r.z1z0 = frame_decompose(lie_bracket(s.z1, s.z0), {s.x, s.z1, s.z0}, {"X", "Z1", "Z0"});
  const RF& m = r.xz0->coefficients[1];
  const RF& n = r.xz0->coefficients[2];
  const RF& q = r.z1z0->coefficients[1];
  const RF& rr = r.z1z0->coefficients[2];
  const RF& A = s.a;

  RF C = c * A;
  RF B = (xa + b * A) / A;
  RF xc_nc = s.x(C) + n * C;
  RF ca = C / A;
  RF z1c = s.z1(C);
  RF F1 = -(B / C) * xc_nc + ca * m + s.x(B);
  RF F2 = q * C - ca * s.z0(A) - B * (rr * A + (A / C) * z1c) + A * s.z1(B);

  EnergyOperator G1;
  G1[EnergySlot::E] = F1;
  G1[EnergySlot::XE] = B + xc_nc / C;
  G1[EnergySlot::X2E] = RF(-1);
  EnergyOperator G2;
  G2[EnergySlot::E] = F2;
  G2[EnergySlot::XE] = rr * A + RF(1) + (A / C) * z1c;
  G2[EnergySlot::Z1E] = A * B;
  G2[EnergySlot::Z1XE] = -A;

  if (F1.is_zero() && F2.is_zero())
    r.label = CaseLabel::Case2a;
  else if (F1.is_zero() || F2.is_zero())
    r.label = CaseLabel::Case2b;
  else
    r.label = CaseLabel::Case2c;
  r.B = std::move(B);
  r.C = std::move(C);
  r.F1 = std::move(F1);
  r.F2 = std::move(F2);
  r.G1 = std::move(G1);
  r.G2 = std::move(G2);
  return r;
}

EnergyOperator compatibility_operator(const ClassificationReport& r) {
  require_case2(r);
  return *r.F2 * *r.G1 - *r.F1 * *r.G2;
}

std::vector<Expr> energy_conditions(const ClassificationReport& r, const Expr& energy) {
  if (is_case0(r.label))
    throw CaseMismatch("energy conditions are not defined in case 0");
  const Session& s = r.session;
  if (is_case1(r.label)) {
    Expr e = compose_energy(s, energy);
    return {s.x(e), s.z0(e)};
  }
  switch (r.label) {
  case CaseLabel::Case2a:
    return {r.G1->apply(s, energy), r.G2->apply(s, energy)};
  case CaseLabel::Case2b:
    return {r.F2->is_zero() ? r.G2->apply(s, energy) : r.G1->apply(s, energy)};
  default:
    return {compatibility_operator(r).apply(s, energy)};
  }
}

Expr candidate_V_from_energy(const ClassificationReport& r, const Expr& energy) {
  require_case2(r);
  if (r.label == CaseLabel::Case2a)
    throw CaseMismatch("F1 and F2 both vanish: no algebraic V in case 2a");
  const Session& s = r.session;
  if (!r.F1->is_zero())
    return Expr(r.F1->inverse()) * r.G1->apply(s, energy);
  return Expr(r.F2->inverse()) * r.G2->apply(s, energy);
}

} // namespace invdyn
