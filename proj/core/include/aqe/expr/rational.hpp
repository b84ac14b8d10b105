#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace aqe {

/// Exact rational number. GMP keeps it canonical: gcd(num, den) = 1 and den > 0.
using Rational = mpq_class;
using Integer = mpz_class;

/// Parses "p" or "p/q" with optional leading sign. Throws aqe::Error on bad input or q = 0.
Rational parse_rational(std::string_view text);

/// "p" when the denominator is 1, otherwise "p/q".
std::string to_string(const Rational& r);

inline double to_double(const Rational& r) { return r.get_d(); }

inline bool is_integer(const Rational& r) { return r.get_den() == 1; }

}  // namespace aqe
