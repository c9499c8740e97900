#include "eldp/rational.hpp"

#include <cmath>
#include <stdexcept>

namespace eldp {

Rational parse_rational(const std::string& text) {
  if (text.empty()) throw std::domain_error("empty rational literal");
  for (char c : text) {
    if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '/' || c == '-' || c == '+')) {
      throw std::domain_error("malformed rational literal: " + text);
    }
  }
  mpq_class q;
  if (q.set_str(text, 10) != 0) {
    throw std::domain_error("malformed rational literal: " + text);
  }
  if (sgn(q.get_den()) == 0) {
    throw std::domain_error("zero denominator in rational literal: " + text);
  }
  q.canonicalize();
  return q;
}

std::string to_string(const BigInt& z) { return z.get_str(10); }

std::string to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str(10);
  return q.get_num().get_str(10) + "/" + q.get_den().get_str(10);
}

BigInt floor_div(const BigInt& a, const BigInt& b) {
  BigInt q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

BigInt ceil_div(const BigInt& a, const BigInt& b) {
  BigInt q;
  mpz_cdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

BigInt floor_div_dyadic(const BigInt& a, double u) {
  if (!(u > 0.0 && u <= 1.0)) throw std::domain_error("dyadic divisor must lie in (0,1]");
  int exp2 = 0;
  const double frac = std::frexp(u, &exp2);  // u = frac * 2^exp2, frac in [0.5, 1)
  const auto mant = static_cast<unsigned long>(std::ldexp(frac, 53));
  // u = mant * 2^(exp2 - 53) with exp2 <= 1, so floor(a/u) = floor(a * 2^(53-exp2) / mant).
  BigInt shifted;
  mpz_mul_2exp(shifted.get_mpz_t(), a.get_mpz_t(), static_cast<mp_bitcnt_t>(53 - exp2));
  BigInt q;
  mpz_fdiv_q_ui(q.get_mpz_t(), shifted.get_mpz_t(), mant);
  return q;
}

double log_bigint(const BigInt& z) {
  signed long exp2 = 0;
  double m = mpz_get_d_2exp(&exp2, z.get_mpz_t());
  return std::log(m) + static_cast<double>(exp2) * M_LN2;
}

Rational pow2_inv(unsigned long k) {
  BigInt den = 1;
  den <<= k;
  Rational q(1, den);
  q.canonicalize();
  return q;
}

DyadicInterval make_dyadic(const BigInt& m, unsigned long bits) {
  if (sgn(m) < 0) throw std::domain_error("dyadic mantissa must be nonnegative");
  BigInt den = 1;
  den <<= bits;
  if (m >= den) throw std::domain_error("dyadic mantissa out of range");
  DyadicInterval iv;
  iv.bits = bits;
  iv.lower = Rational(m, den);
  iv.lower.canonicalize();
  iv.upper = Rational(m + 1, den);
  iv.upper.canonicalize();
  return iv;
}

DyadicInterval dyadic_cover(const Rational& lo, const Rational& hi,
                            unsigned long max_bits) {
  if (sgn(lo) <= 0 || hi >= 1 || lo > hi) {
    throw std::domain_error("dyadic_cover requires 0 < lo <= hi < 1");
  }
  for (unsigned long bits = max_bits;; --bits) {
    if (bits == 0) throw std::domain_error("no dyadic cell strictly inside (0,1) covers the interval");
    BigInt den = 1;
    den <<= bits;
    BigInt m = floor_div(lo.get_num() * den, lo.get_den());
    Rational cell_hi(m + 1, den);
    cell_hi.canonicalize();
    if (hi <= cell_hi) {
      DyadicInterval iv = make_dyadic(m, bits);
      if (sgn(iv.lower) > 0 && iv.upper < 1) return iv;
    }
  }
}

}  // namespace eldp
