#pragma once

#include "invdyn/geometry/session.hpp"
#include "invdyn/kernel/parser.hpp"

namespace testing_support {

using namespace invdyn;

inline SymbolTable table() {
  SymbolTable t = SymbolTable::with_formal_arguments();
  for (const char* c : {"C", "C1", "C2", "C3", "k"})
    t.declare(c);
  return t;
}

inline RF rf(const std::string& text) { return parse(text, table()).to_rational(); }
inline Expr ex(const std::string& text) { return parse_canonical(text, table()); }
inline CurveData data(const std::string& phi, const std::string& psi) { return CurveData::make(ex(phi), ex(psi)); }
inline VectorField vf(const std::string& a, const std::string& b, const std::string& c) { return {rf(a), rf(b), rf(c)}; }

inline Metric metric(std::initializer_list<std::pair<const char*, const char*>> overrides) {
  std::map<Symbol, RF> m;
  for (auto [name, value] : overrides)
    m.emplace(Symbol::intern(name), rf(value));
  return Metric::symbolic_with(m);
}

inline Metric numeric_metric(long g11, long g12, long g13, long g22, long g23, long g33) {
  return Metric({RF(g11), RF(g12), RF(g13), RF(g22), RF(g23), RF(g33)});
}

/// v == lambda * w for a nonzero constant lambda.
inline bool constant_multiple(const VectorField& v, const VectorField& w) {
  if (v.is_zero() || w.is_zero() || !cross(v, w).is_zero())
    return false;
  for (std::size_t i = 0; i < 3; ++i)
    if (!w[i].is_zero())
      return (v[i] / w[i]).is_constant();
  return false;
}

} // namespace testing_support
