#include "invdyn/kernel/symbol.hpp"

#include "invdyn/kernel/errors.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <mutex>

namespace invdyn {

namespace {

constexpr std::size_t kPreregistered = 16;

// Slots are written once under the mutex and never change afterwards, so a
// Symbol (which can only be obtained after its slot was published) may read
// its own slot without locking.
struct Registry {
  std::mutex mutex;
  std::array<std::string, kMaxSymbols> names;
  std::array<SymbolKind, kMaxSymbols> kinds{};
  std::size_t count = 0;

  Registry() {
    for (const char* name : {"x", "y", "z", "g11", "g12", "g13", "g22", "g23", "g33", "PHI", "PSI",
                             "C", "C1", "C2", "C3", "k"})
      add(name);
  }

  void add(std::string_view name) {
    names[count] = std::string(name);
    kinds[count] = kind_of_name(name);
    ++count;
  }

  std::optional<std::size_t> index_of(std::string_view name) const {
    for (std::size_t i = 0; i < count; ++i)
      if (names[i] == name)
        return i;
    return std::nullopt;
  }
};

Registry& registry() {
  static Registry r;
  return r;
}

} // namespace

const char* to_string(SymbolKind kind) {
  switch (kind) {
  case SymbolKind::geometric: return "geometric";
  case SymbolKind::metric_parameter: return "metric-parameter";
  case SymbolKind::free_constant: return "free-constant";
  case SymbolKind::formal_argument: return "formal-argument";
  }
  return "?";
}

bool is_identifier(std::string_view name) {
  if (name.empty() || !(std::isalpha(static_cast<unsigned char>(name[0])) || name[0] == '_'))
    return false;
  return std::all_of(name.begin(), name.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

SymbolKind kind_of_name(std::string_view name) {
  if (name == "x" || name == "y" || name == "z")
    return SymbolKind::geometric;
  if (name == "PHI" || name == "PSI")
    return SymbolKind::formal_argument;
  static constexpr std::array<std::string_view, 6> metric{"g11", "g12", "g13", "g22", "g23", "g33"};
  if (std::find(metric.begin(), metric.end(), name) != metric.end())
    return SymbolKind::metric_parameter;
  return SymbolKind::free_constant;
}

Symbol Symbol::intern(std::string_view name) {
  if (!is_identifier(name) || name == "ln" || name == "exp")
    throw InputError("invalid symbol name '" + std::string(name) + "'");
  auto& r = registry();
  std::lock_guard lock(r.mutex);
  if (auto i = r.index_of(name))
    return Symbol(static_cast<std::uint8_t>(*i));
  if (r.count >= kMaxSymbols)
    throw InputError("too many distinct symbols (limit " + std::to_string(kMaxSymbols) + ")");
  r.add(name);
  return Symbol(static_cast<std::uint8_t>(r.count - 1));
}

std::optional<Symbol> Symbol::find(std::string_view name) {
  auto& r = registry();
  std::lock_guard lock(r.mutex);
  if (auto i = r.index_of(name))
    return Symbol(static_cast<std::uint8_t>(*i));
  return std::nullopt;
}

Symbol Symbol::from_index(std::size_t index) {
  if (index < kPreregistered)
    return Symbol(static_cast<std::uint8_t>(index));
  auto& r = registry();
  std::lock_guard lock(r.mutex);
  if (index >= r.count)
    throw InputError("symbol index out of range");
  return Symbol(static_cast<std::uint8_t>(index));
}

std::size_t Symbol::registered_count() {
  auto& r = registry();
  std::lock_guard lock(r.mutex);
  return r.count;
}

const std::string& Symbol::name() const { return registry().names[index_]; }

SymbolKind Symbol::kind() const { return registry().kinds[index_]; }

bool Symbol::differentiable() const {
  auto k = kind();
  return k == SymbolKind::geometric || k == SymbolKind::formal_argument;
}

namespace sym {

Symbol x() { return Symbol::from_index(0); }
Symbol y() { return Symbol::from_index(1); }
Symbol z() { return Symbol::from_index(2); }

Symbol g(int i, int j) {
  if (i > j)
    std::swap(i, j);
  if (i < 1 || j > 3)
    throw InputError("metric index out of range");
  static constexpr std::array<std::array<int, 4>, 4> slot{{{0, 0, 0, 0}, {0, 3, 4, 5}, {0, 0, 6, 7}, {0, 0, 0, 8}}};
  return Symbol::from_index(static_cast<std::size_t>(slot[i][j]));
}

Symbol phi() { return Symbol::from_index(9); }
Symbol psi() { return Symbol::from_index(10); }

const std::vector<Symbol>& coordinates() {
  static const std::vector<Symbol> c{x(), y(), z()};
  return c;
}

const std::vector<Symbol>& metric_parameters() {
  static const std::vector<Symbol> p{g(1, 1), g(1, 2), g(1, 3), g(2, 2), g(2, 3), g(3, 3)};
  return p;
}

} // namespace sym

SymbolTable::SymbolTable() {
  for (auto s : sym::coordinates())
    symbols_.push_back(s);
  for (auto s : sym::metric_parameters())
    symbols_.push_back(s);
}

SymbolTable SymbolTable::with_formal_arguments() {
  SymbolTable t;
  t.symbols_.push_back(sym::phi());
  t.symbols_.push_back(sym::psi());
  return t;
}

Symbol SymbolTable::declare(std::string_view name) {
  auto s = Symbol::intern(name);
  if (std::find(symbols_.begin(), symbols_.end(), s) == symbols_.end())
    symbols_.push_back(s);
  return s;
}

bool SymbolTable::contains(std::string_view name) const { return lookup(name).has_value(); }

std::optional<Symbol> SymbolTable::lookup(std::string_view name) const {
  auto s = Symbol::find(name);
  if (!s || std::find(symbols_.begin(), symbols_.end(), *s) == symbols_.end())
    return std::nullopt;
  return s;
}

} // namespace invdyn
