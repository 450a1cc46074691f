#pragma once

#include <string>
#include <string_view>

#include <gmpxx.h>

namespace qmzv {

using Integer = mpz_class;
using Rational = mpq_class;

// Always "numerator/denominator" in lowest terms, including integers ("3/1").
std::string to_string(const Rational& x);
std::string to_string(const Integer& x);

// Parses "p/r" (r > 0). Decimal input is rejected. Throws std::invalid_argument.
Rational parse_ratio(std::string_view text);

// Truncated decimal rendering with `digits` fractional digits; display only.
std::string to_decimal(const Rational& x, int digits = 20);

Rational power(const Rational& base, unsigned long exponent);

Integer binomial(long n, long k);

}  // namespace qmzv
