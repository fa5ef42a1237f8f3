#pragma once

#include "invdyn/kernel/expr.hpp"

#include <string_view>

namespace invdyn {

/// Parses the expression grammar
///
///   expr    := term (('+' | '-') term)*
///   term    := unary (('*' | '/') unary)*
///   unary   := '-' unary | power
///   power   := primary ('^' unary)?
///   primary := number | identifier | ('ln' | 'exp') '(' expr ')' | '(' expr ')'
///   number  := digit+ ('.' digit+)?
///
/// into a structural tree (raw nodes, no simplification). Decimal literals are
/// read exactly. Identifiers must be declared in `table`.
Expr parse(std::string_view text, const SymbolTable& table);

/// parse(text, table).canonical()
Expr parse_canonical(std::string_view text, const SymbolTable& table);

} // namespace invdyn
