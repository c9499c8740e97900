#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace eldp {

// Arbitrary-precision integers and rationals are GMP values throughout.
// A Rational is always canonical: denominator > 0 and gcd(|num|, den) = 1.
using BigInt = mpz_class;
using Rational = mpq_class;

// Parses "p/q" or "p" (decimal-free). Canonicalizes; rejects zero
// denominators and malformed input with std::domain_error.
Rational parse_rational(const std::string& text);

std::string to_string(const BigInt& z);
std::string to_string(const Rational& q);

// floor(a / b) for b > 0.
BigInt floor_div(const BigInt& a, const BigInt& b);
// ceil(a / b) for b > 0.
BigInt ceil_div(const BigInt& a, const BigInt& b);

// floor(a / u) for a dyadic double u in (0, 1], computed exactly from u's
// mantissa and exponent.
BigInt floor_div_dyadic(const BigInt& a, double u);

// Natural log of z > 0, computed from the top bits plus the exact binary
// exponent so it stays accurate for values far beyond double range.
double log_bigint(const BigInt& z);

// 2^-k as an exact rational.
Rational pow2_inv(unsigned long k);

inline bool is_zero(const Rational& q) { return sgn(q) == 0; }

// A closed dyadic interval [m/2^bits, (m+1)/2^bits] representing a real
// known only to finite precision. Width is exactly 2^-bits.
struct DyadicInterval {
  Rational lower;
  Rational upper;
  unsigned long bits = 0;
};

// Builds [m/2^bits, (m+1)/2^bits]; requires 0 <= m < 2^bits.
DyadicInterval make_dyadic(const BigInt& m, unsigned long bits);

// Smallest cell of the 2^-bits grid whose closed form contains [lo, hi],
// found by decreasing resolution until one cell covers both endpoints.
// Requires 0 < lo <= hi < 1.
DyadicInterval dyadic_cover(const Rational& lo, const Rational& hi,
                            unsigned long max_bits);

}  // namespace eldp
