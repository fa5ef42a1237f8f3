#pragma once

#include "invdyn/kernel/polynomial.hpp"

namespace invdyn {

/// Greatest common divisor over Z, normalized to a positive leading
/// coefficient. gcd(0, 0) == 0.
ZPoly gcd(const ZPoly& a, const ZPoly& b);

/// True only when a and b are shown coprime by univariate images modulo a
/// prime; false means undecided.
bool provably_coprime(const ZPoly& a, const ZPoly& b);

/// False only when b certainly does not divide a.
bool may_divide(const ZPoly& a, const ZPoly& b);

/// p divided by its integer content, sign fixed so the leading coefficient is positive.
ZPoly primitive_part(const ZPoly& p);

/// Multiplies by -1 if the leading coefficient is negative.
ZPoly with_positive_lc(ZPoly p);

} // namespace invdyn
