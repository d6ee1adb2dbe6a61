#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace lipfree {

using Rational = mpq_class;

// Exact value of the shortest decimal literal that round-trips to `value`,
// so that 0.9 means 9/10 rather than the nearest binary fraction.
Rational decimal_rational(double value);

// Accepts "p/q", integers and decimal literals ("0.25", "-1e-3").
Rational parse_rational(std::string_view text);

// num/den in lowest terms (the two-argument mpq constructor does not reduce).
Rational make_rational(long num, long den);

std::string to_string(const Rational& value);
double to_double(const Rational& value);
bool is_integer(const Rational& value);
Rational ceil(const Rational& value);

}  // namespace lipfree
