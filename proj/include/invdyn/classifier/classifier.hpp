#pragma once

#include "invdyn/geometry/session.hpp"

#include <optional>

namespace invdyn {

enum class CaseLabel { Case0a, Case0b, Case1a1, Case1a2, Case2a, Case2b, Case2c };

const char* to_string(CaseLabel label);
std::optional<CaseLabel> parse_case_label(std::string_view text);
bool is_case0(CaseLabel label);
bool is_case1(CaseLabel label);
bool is_case2(CaseLabel label);

/// Derivatives of the energy function that occur in the case-2 relations.
enum class EnergySlot { E, XE, X2E, Z1E, Z1XE };
inline constexpr std::size_t kEnergySlots = 5;
const char* to_string(EnergySlot slot);

/// Linear second-order operator acting on E(PHI, PSI) through the session's X and Z1.
struct EnergyOperator {
  std::array<RF, kEnergySlots> coefficients;

  const RF& operator[](EnergySlot s) const { return coefficients[static_cast<std::size_t>(s)]; }
  RF& operator[](EnergySlot s) { return coefficients[static_cast<std::size_t>(s)]; }

  /// Operator applied to E, expressed in x, y, z. Rational whenever E and the data are.
  Expr apply(const Session& s, const Expr& energy) const;

  friend EnergyOperator operator-(const EnergyOperator& a, const EnergyOperator& b);
  friend EnergyOperator operator*(const RF& k, const EnergyOperator& op);
};

std::string to_string(const EnergyOperator& op);

/// E(PHI, PSI) composed with the data; PHI and PSI always refer to the
/// unswapped input.
Expr compose_energy(const Session& s, const Expr& energy);

struct ClassificationReport {
  CaseLabel label = CaseLabel::Case0a;
  Session session;
  bool straight_line = false;

  // Case 0: rescaled Z1, Z2.
  std::optional<std::array<VectorField, 2>> case0_basis;
  // Z0-orthogonal distribution: bracket test and d(alpha0) ^ alpha0 test.
  bool orthogonal_integrable = false;
  // d(beta0) ^ alpha0 == 0; empty when Z0 is null for g.
  std::optional<bool> beta0_closed;

  // Case 1 and 2: [X,Z1] = a X + b Z1 + c Z0.
  std::optional<FrameDecomposition> xz1;
  // Case 1: span{X, Z0} integrable.
  std::optional<bool> xz0_integrable;
  // Case 2: [X,Z0] = l X + m Z1 + n Z0, [Z1,Z0] = p X + q Z1 + r Z0.
  std::optional<FrameDecomposition> xz0, z1z0;
  std::optional<RF> B, C, F1, F2;
  std::optional<EnergyOperator> G1, G2;

  std::vector<std::string> notes;

  explicit ClassificationReport(Session s) : session(std::move(s)) {}
};

/// All 2x2 minors of (dZ, Z0) vanish.
bool is_straight_line_family(const CurveData& data, const Metric& g);

/// Throws DegenerateData for dphi ^ dpsi == 0, TheoremViolation if a
/// case-1 frame has X(A) + b A != 0.
ClassificationReport classify(const CurveData& data, const Metric& g);

struct Case0Result {
  CaseLabel label;
  std::array<VectorField, 2> basis;
};

/// Throws CaseMismatch on non-straight-line data.
Case0Result case0_subcase(const CurveData& data, const Metric& g);

/// Residuals that vanish identically when E is admissible for the reported case.
/// Throws CaseMismatch in case 0.
std::vector<Expr> energy_conditions(const ClassificationReport& r, const Expr& energy);

/// Compatibility operator F2 G1 - F1 G2; case 2 only.
EnergyOperator compatibility_operator(const ClassificationReport& r);

/// V = G1(E)/F1 or G2(E)/F2, whichever F is nonzero (F1 preferred). Throws
/// CaseMismatch outside case 2b/2c.
Expr candidate_V_from_energy(const ClassificationReport& r, const Expr& energy);

} // namespace invdyn
