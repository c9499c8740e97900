#pragma once

#include <cstddef>
#include <vector>

#include "eldp/common.hpp"
#include "eldp/rational.hpp"

namespace eldp {

enum class ExpansionKind { Engel, ModifiedEngel };

// Digits of an Engel or modified-Engel expansion. Engel digits are >= 2 and
// non-decreasing; modified-Engel digits satisfy d_{n+1} >= d_n + 1.
// `terminated` is true iff the expansion ended exactly (rational input whose
// remainder reached zero).
struct DigitSequence {
  ExpansionKind kind = ExpansionKind::Engel;
  std::vector<BigInt> digits;
  bool terminated = false;
};

// Greedy Engel expansion of x in (0,1):
//   u_1 = x,  a_n = ceil(1/u_n),  u_{n+1} = a_n * u_n - 1.
// All arithmetic is exact rational. Stops after max_digits digits or when
// the remainder reaches zero. Rational inputs always terminate (the
// remainder's numerator strictly decreases at fixed denominator).
DigitSequence engel_expand(const Rational& x, std::size_t max_digits);

// Greedy modified-Engel expansion of x in (0,1):
//   y_1 = x,  d_n = the integer with 1/d_n <= y_n < 1/(d_n - 1),
//   y_{n+1} = (d_n - 1)(y_n - 1/d_n).
// Boundary convention: digit cells are left-closed, so y_n = 1/d exactly
// takes digit d and terminates at the next step. Unlike the plain Engel
// kind, most rationals do NOT terminate (2/7 begins 4, 10, 16, 38, ... with
// remainders that never vanish), so callers must rely on max_digits.
DigitSequence modified_engel_expand(const Rational& x, std::size_t max_digits);

// Exact partial sum of the series determined by the first `terms` digits:
//   Engel:          sum 1/(a_1 ... a_k)
//   modified Engel: sum 1/((d_1-1)...(d_{k-1}-1) d_k)
// Throws std::out_of_range if terms exceeds the digit count.
Rational reconstruct(const DigitSequence& seq, std::size_t terms);

// Digits certain to be shared by every point of the interval. A digit is
// emitted only when both endpoints (hence, by monotonicity of the digit
// cells, every interior point) agree; extraction stops at the first
// ambiguity. The result is a prefix of the expansion of any x in the
// interval, and `terminated` is always false since a positive-width
// interval never pins down an exact expansion.
DigitSequence expand_certified(const DyadicInterval& interval, ExpansionKind kind,
                               std::size_t max_digits);

namespace detail {

// Digit of a remainder u in (0,1): the d with 1/d <= u < 1/(d-1),
// i.e. ceil(1/u). Shared by both kinds.
BigInt digit_of(const Rational& u);

// One exact remainder step for the given kind.
Rational remainder_step(ExpansionKind kind, const Rational& u, const BigInt& digit);

}  // namespace detail

}  // namespace eldp
