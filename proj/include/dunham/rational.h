#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace dunham {

/// Exact rational backed by GMP. mpq_class keeps values canonical
/// (reduced, positive denominator, zero as 0/1) after every arithmetic
/// operation; constructors from num/den pairs go through make_rational.
using Rational = mpq_class;

Rational make_rational(long numerator, long denominator = 1);

/// Parses "p", "-p", "p/q" (integers of any size).
Rational parse_rational(std::string_view text);

/// Parses a decimal literal exactly: "0.1" -> 1/10, "2.5e-3" -> 1/400.
Rational parse_decimal(std::string_view text);

/// "p" or "p/q".
std::string to_string(const Rational& value);

double to_double(const Rational& value);

}  // namespace dunham
