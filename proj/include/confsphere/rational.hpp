#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace confsphere {

using Rational = mpq_class;
using Integer = mpz_class;

/// Canonical a/b; the raw mpq_class(a, b) constructor does not reduce.
Rational frac(long a, long b = 1);

/// Parses "p", "-p" or "p/q" into a canonical rational. Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

/// Canonical text: "p" when the denominator is one, otherwise "p/q".
std::string to_string(const Rational& q);

double to_double(const Rational& q);

}  // namespace confsphere
