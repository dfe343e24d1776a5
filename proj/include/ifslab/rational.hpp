#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace ifslab {

/// Exact rational number. All geometry on the line is carried in this type.
using Rational = mpq_class;
using Integer = mpz_class;

/// Parses "p/q", "p", or a terminating decimal such as "0.25"; result is canonical.
Rational parse_rational(std::string_view text);

/// Parses a resolution given either as a rational or as a power of two "2^-k".
Rational parse_resolution(std::string_view text);

std::string to_string(const Rational& q);

/// 2^e for any integer exponent, exact.
Rational pow2(long e);

/// q^e for any integer exponent (q != 0 when e < 0), exact.
Rational pow(const Rational& q, long e);

Integer floor(const Rational& q);

long double to_long_double(const Rational& q);

/// Natural log of a positive rational, accurate even when numerator and
/// denominator overflow a long double.
long double log(const Rational& q);

}  // namespace ifslab
