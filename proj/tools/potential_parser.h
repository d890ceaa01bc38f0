#pragma once

#include "dunham/potential.h"

#include <string_view>

namespace dunham::cli {

/// Parses a polynomial in x such as "x^4", "0.5*x^2 + 0.1*x^4" or
/// "(x^2 - 1)^2 + 1/2". Decimal literals become exact fractions.
///
///     expr   := ['+'|'-'] term (('+'|'-') term)*
///     term   := factor (('*'|'/') factor)*     // '/' only by a constant
///     factor := number | 'x' | '(' expr ')'  ['^' integer]
///
/// Throws ParseError naming the offending token and its column, and
/// PreconditionError when the polynomial is not a confining potential.
Potential parse_potential(std::string_view text);

/// The coefficient list without the confinement checks.
std::vector<Rational> parse_polynomial(std::string_view text);

}  // namespace dunham::cli
