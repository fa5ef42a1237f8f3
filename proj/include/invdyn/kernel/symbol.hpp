#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace invdyn {

/// Upper bound on the number of distinct symbols in one process.
inline constexpr std::size_t kMaxSymbols = 32;

enum class SymbolKind { geometric, metric_parameter, free_constant, formal_argument };

const char* to_string(SymbolKind kind);

/// Interned identifier. The index fixes the global variable order used by
/// monomial orders: x, y, z, g11, g12, g13, g22, g23, g33, PHI, PSI, then the
/// usual constants, then anything registered later in first-use order.
/// The kind is a function of the name.
class Symbol {
public:
  Symbol() = default;

  /// Registers on first use. Throws if the name is not an identifier or the
  /// registry is full.
  static Symbol intern(std::string_view name);
  static std::optional<Symbol> find(std::string_view name);
  static Symbol from_index(std::size_t index);
  static std::size_t registered_count();

  std::size_t index() const noexcept { return index_; }
  const std::string& name() const;
  SymbolKind kind() const;
  /// Partial derivatives are only taken with respect to x, y, z, PHI, PSI.
  bool differentiable() const;

  friend bool operator==(Symbol, Symbol) = default;
  friend auto operator<=>(Symbol, Symbol) = default;

private:
  explicit Symbol(std::uint8_t index) : index_(index) {}
  std::uint8_t index_ = 0;
};

SymbolKind kind_of_name(std::string_view name);
bool is_identifier(std::string_view name);

namespace sym {
Symbol x();
Symbol y();
Symbol z();
/// Metric parameter g_ij for 1 <= i, j <= 3 (symmetric: g(2,1) == g(1,2)).
Symbol g(int i, int j);
Symbol phi();
Symbol psi();
/// The three geometric coordinates in order.
const std::vector<Symbol>& coordinates();
/// g11, g12, g13, g22, g23, g33.
const std::vector<Symbol>& metric_parameters();
} // namespace sym

/// Declared identifiers of one problem. Parsing consults it; undeclared names are errors.
class SymbolTable {
public:
  /// x, y, z and the six metric parameters are always declared.
  SymbolTable();
  static SymbolTable with_formal_arguments();

  Symbol declare(std::string_view name);
  bool contains(std::string_view name) const;
  std::optional<Symbol> lookup(std::string_view name) const;
  const std::vector<Symbol>& symbols() const { return symbols_; }

private:
  std::vector<Symbol> symbols_;
};

} // namespace invdyn
