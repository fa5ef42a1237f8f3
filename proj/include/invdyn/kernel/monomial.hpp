#pragma once

#include "invdyn/kernel/errors.hpp"
#include "invdyn/kernel/symbol.hpp"

#include <array>
#include <compare>
#include <cstdint>
#include <cstring>
#include <functional>

namespace invdyn {

/// Exponent vector indexed by global symbol index.
class Monomial {
public:
  using Exponent = std::uint8_t;
  static constexpr unsigned kMaxExponent = 255;

  Monomial() = default;

  static Monomial of(Symbol s, unsigned e = 1) {
    Monomial m;
    m.set(s.index(), e);
    return m;
  }

  unsigned operator[](std::size_t var) const noexcept { return e_[var]; }
  unsigned degree() const noexcept { return deg_; }
  bool is_one() const noexcept { return deg_ == 0; }

  void set(std::size_t var, unsigned e) {
    if (e > kMaxExponent)
      throw Error("monomial exponent overflow");
    deg_ = static_cast<std::uint16_t>(deg_ - e_[var] + e);
    e_[var] = static_cast<Exponent>(e);
  }

  /// Bit i set iff variable i occurs.
  std::uint32_t support() const noexcept {
    std::uint32_t mask = 0;
    for (std::size_t i = 0; i < kMaxSymbols; ++i)
      if (e_[i])
        mask |= 1u << i;
    return mask;
  }

  Monomial operator*(const Monomial& o) const {
    Monomial r;
    for (std::size_t i = 0; i < kMaxSymbols; ++i) {
      unsigned e = unsigned(e_[i]) + o.e_[i];
      if (e > kMaxExponent)
        throw Error("monomial exponent overflow");
      r.e_[i] = static_cast<Exponent>(e);
    }
    r.deg_ = static_cast<std::uint16_t>(deg_ + o.deg_);
    return r;
  }

  bool divides(const Monomial& o) const noexcept {
    for (std::size_t i = 0; i < kMaxSymbols; ++i)
      if (e_[i] > o.e_[i])
        return false;
    return true;
  }

  /// Requires divisor.divides(*this).
  Monomial operator/(const Monomial& divisor) const noexcept {
    Monomial r;
    for (std::size_t i = 0; i < kMaxSymbols; ++i)
      r.e_[i] = static_cast<Exponent>(e_[i] - divisor.e_[i]);
    r.deg_ = static_cast<std::uint16_t>(deg_ - divisor.deg_);
    return r;
  }

  static Monomial gcd(const Monomial& a, const Monomial& b) noexcept {
    Monomial r;
    for (std::size_t i = 0; i < kMaxSymbols; ++i) {
      r.e_[i] = std::min(a.e_[i], b.e_[i]);
      r.deg_ = static_cast<std::uint16_t>(r.deg_ + r.e_[i]);
    }
    return r;
  }

  /// Same exponents with variable `var` removed.
  Monomial without(std::size_t var) const noexcept {
    Monomial r = *this;
    r.deg_ = static_cast<std::uint16_t>(r.deg_ - r.e_[var]);
    r.e_[var] = 0;
    return r;
  }

  /// Pure lexicographic comparison, lowest symbol index most significant.
  static int lex_compare(const Monomial& a, const Monomial& b) noexcept {
    return std::memcmp(a.e_.data(), b.e_.data(), kMaxSymbols);
  }

  friend bool operator==(const Monomial& a, const Monomial& b) noexcept {
    return a.deg_ == b.deg_ && std::memcmp(a.e_.data(), b.e_.data(), kMaxSymbols) == 0;
  }

  /// Graded lexicographic order.
  friend std::strong_ordering operator<=>(const Monomial& a, const Monomial& b) noexcept {
    if (a.deg_ != b.deg_)
      return a.deg_ <=> b.deg_;
    int c = lex_compare(a, b);
    return c <=> 0;
  }

  std::size_t hash() const noexcept {
    std::uint64_t h = 1469598103934665603ull;
    for (auto e : e_) {
      h ^= e;
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }

private:
  std::array<Exponent, kMaxSymbols> e_{};
  std::uint16_t deg_ = 0;
};

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const noexcept { return m.hash(); }
};

} // namespace invdyn
