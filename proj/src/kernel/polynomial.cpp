#include "invdyn/kernel/polynomial.hpp"

namespace invdyn {

namespace {

std::string monomial_string(const Monomial& m) {
  std::string out;
  for (std::size_t i = 0; i < kMaxSymbols; ++i) {
    unsigned e = m[i];
    if (!e)
      continue;
    if (!out.empty())
      out += '*';
    out += Symbol::from_index(i).name();
    if (e > 1)
      out += '^' + std::to_string(e);
  }
  return out;
}

} // namespace

template <class Coeff>
std::string to_string(const Poly<Coeff>& p) {
  if (p.is_zero())
    return "0";
  std::string out;
  bool first = true;
  for (const auto& t : p.terms()) {
    Coeff c = t.coeff;
    bool negative = sgn(c) < 0;
    if (negative)
      c = -c;
    if (first)
      out += negative ? "-" : "";
    else
      out += negative ? " - " : " + ";
    first = false;
    std::string mono = monomial_string(t.mono);
    if (mono.empty())
      out += c.get_str();
    else if (c == 1)
      out += mono;
    else
      out += c.get_str() + "*" + mono;
  }
  return out;
}

template std::string to_string(const ZPoly&);
template std::string to_string(const QPoly&);

} // namespace invdyn
