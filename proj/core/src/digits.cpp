#include "eldp/digits.hpp"

#include <stdexcept>

namespace eldp {

namespace detail {

BigInt digit_of(const Rational& u) {
  return ceil_div(u.get_den(), u.get_num());
}

Rational remainder_step(ExpansionKind kind, const Rational& u, const BigInt& digit) {
  Rational next;
  if (kind == ExpansionKind::Engel) {
    next = Rational(digit) * u - 1;
  } else {
    next = Rational(digit - 1) * (u - Rational(1, digit));
  }
  next.canonicalize();
  return next;
}

}  // namespace detail

namespace {

void check_open_unit(const Rational& x) {
  if (sgn(x) <= 0 || x >= 1) {
    throw std::domain_error("expansion input must lie strictly inside (0,1)");
  }
}

void check_digit_order(const DigitSequence& seq) {
  for (std::size_t i = 1; i < seq.digits.size(); ++i) {
    const bool ok = seq.kind == ExpansionKind::Engel
                        ? seq.digits[i] >= seq.digits[i - 1]
                        : seq.digits[i] >= seq.digits[i - 1] + 1;
    if (!ok) throw std::logic_error("digit monotonicity violated");
  }
}

DigitSequence expand_impl(ExpansionKind kind, const Rational& x, std::size_t max_digits) {
  check_open_unit(x);
  if (max_digits == 0) throw std::domain_error("max_digits must be positive");

  DigitSequence seq;
  seq.kind = kind;
  Rational u = x;
  while (seq.digits.size() < max_digits) {
    const BigInt d = detail::digit_of(u);
    seq.digits.push_back(d);
    u = detail::remainder_step(kind, u, d);
    if (is_zero(u)) {
      seq.terminated = true;
      break;
    }
  }
  check_digit_order(seq);
  return seq;
}

}  // namespace

DigitSequence engel_expand(const Rational& x, std::size_t max_digits) {
  return expand_impl(ExpansionKind::Engel, x, max_digits);
}

DigitSequence modified_engel_expand(const Rational& x, std::size_t max_digits) {
  return expand_impl(ExpansionKind::ModifiedEngel, x, max_digits);
}

Rational reconstruct(const DigitSequence& seq, std::size_t terms) {
  if (terms > seq.digits.size()) {
    throw std::out_of_range("reconstruct: more terms than digits");
  }
  Rational sum = 0;
  BigInt scale = 1;  // Engel: a_1...a_k; modified: (d_1-1)...(d_{k-1}-1) d_k pieces
  for (std::size_t k = 0; k < terms; ++k) {
    const BigInt& d = seq.digits[k];
    if (seq.kind == ExpansionKind::Engel) {
      scale *= d;
      Rational term(1, scale);
      term.canonicalize();
      sum += term;
    } else {
      Rational term(1, scale * d);
      term.canonicalize();
      sum += term;
      scale *= d - 1;
    }
  }
  sum.canonicalize();
  return sum;
}

DigitSequence expand_certified(const DyadicInterval& interval, ExpansionKind kind,
                               std::size_t max_digits) {
  if (sgn(interval.lower) <= 0 || interval.upper >= 1) {
    throw std::domain_error("certified expansion needs an interval strictly inside (0,1)");
  }
  DigitSequence seq;
  seq.kind = kind;
  Rational lo = interval.lower;
  Rational hi = interval.upper;
  while (seq.digits.size() < max_digits) {
    // Once the lower remainder hits 0 the endpoint expansions diverge
    // (one terminated, one did not), so no further digit is certain.
    if (sgn(lo) <= 0 || hi >= 1) break;
    const BigInt d_lo = detail::digit_of(lo);
    const BigInt d_hi = detail::digit_of(hi);
    if (d_lo != d_hi) break;
    seq.digits.push_back(d_lo);
    lo = detail::remainder_step(kind, lo, d_lo);
    hi = detail::remainder_step(kind, hi, d_lo);
  }
  return seq;
}

}  // namespace eldp
