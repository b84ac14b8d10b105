#pragma once

#include <span>
#include <string>
#include <string_view>

#include "aqe/expr/scalar_expr.hpp"

namespace aqe {

/// Parses an ASCII scalar expression over the named coordinates.
///
///   expr   := term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*
///   factor := '-' factor | base ('^' integer)?
///   base   := integer | ident | '(' expr ')' | ('exp'|'log') '(' expr ')'
///
/// A rational literal p/q is the quotient of two integer bases. Decimal points are rejected.
/// Throws ParseError (with the byte offset) or UnknownIdentifier.
ScalarExpr parse_scalar(std::string_view text, std::span<const std::string> coords);

}  // namespace aqe
