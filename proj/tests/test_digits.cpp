#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <stdexcept>
#include <vector>

#include "eldp/digits.hpp"
#include "eldp/rng.hpp"

using namespace eldp;

namespace {

std::vector<long> as_longs(const DigitSequence& seq) {
  std::vector<long> out;
  for (const auto& d : seq.digits) out.push_back(d.get_si());
  return out;
}

Rational rat(long p, long q) {
  Rational r(p, q);
  r.canonicalize();
  return r;
}

}  // namespace

TEST_CASE("Engel expansion of the worked rationals") {
  const auto a = engel_expand(rat(3, 8), 10);
  CHECK(as_longs(a) == std::vector<long>{3, 8});
  CHECK(a.terminated);
  CHECK(reconstruct(a, 2) == rat(3, 8));

  const auto b = engel_expand(rat(7, 10), 10);
  CHECK(as_longs(b) == std::vector<long>{2, 3, 5});
  CHECK(b.terminated);
  CHECK(reconstruct(b, 3) == rat(7, 10));

  const auto c = engel_expand(rat(1, 2), 10);
  CHECK(as_longs(c) == std::vector<long>{2});
  CHECK(c.terminated);
}

TEST_CASE("modified Engel expansion of the worked rationals") {
  const auto a = modified_engel_expand(rat(3, 8), 10);
  CHECK(as_longs(a) == std::vector<long>{3, 12});
  CHECK(a.terminated);
  CHECK(reconstruct(a, 2) == rat(3, 8));

  const auto b = modified_engel_expand(rat(7, 10), 10);
  CHECK(as_longs(b) == std::vector<long>{2, 5});
  CHECK(b.terminated);

  const auto c = modified_engel_expand(rat(1, 2), 10);
  CHECK(as_longs(c) == std::vector<long>{2});
  CHECK(c.terminated);
}

TEST_CASE("a generic rational has an infinite modified expansion") {
  // 2/7 never terminates; its digit tail keeps growing superexponentially.
  const auto seq = modified_engel_expand(rat(2, 7), 8);
  CHECK_FALSE(seq.terminated);
  const std::vector<long> head = {4, 10, 16, 38, 58, 121, 173, 277};
  CHECK(as_longs(seq) == head);
}

TEST_CASE("reconstruct partial sums") {
  DigitSequence eng;
  eng.kind = ExpansionKind::Engel;
  eng.digits = {2, 3, 5};
  CHECK(reconstruct(eng, 3) == rat(7, 10));
  CHECK(reconstruct(eng, 1) == rat(1, 2));

  DigitSequence mod;
  mod.kind = ExpansionKind::ModifiedEngel;
  mod.digits = {3, 12};
  CHECK(reconstruct(mod, 2) == rat(3, 8));

  CHECK_THROWS_AS(reconstruct(mod, 3), std::out_of_range);
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(engel_expand(rat(0, 1), 5), std::domain_error);
  CHECK_THROWS_AS(engel_expand(rat(1, 1), 5), std::domain_error);
  CHECK_THROWS_AS(modified_engel_expand(rat(-1, 2), 5), std::domain_error);
}

TEST_CASE("round trip and remainder bound over random rationals") {
  RngStream rng(7, 0);
  for (int t = 0; t < 300; ++t) {
    const unsigned long q = 2 + rng.next_u64() % 9999;
    const unsigned long p = 1 + rng.next_u64() % (q - 1);
    const Rational x = rat(static_cast<long>(p), static_cast<long>(q));

    const auto eng = engel_expand(x, 100000);
    REQUIRE(eng.terminated);
    CHECK(reconstruct(eng, eng.digits.size()) == x);
    // 0 <= x - S_n < 1 / (a_1 ... a_n) along every prefix
    BigInt prod = 1;
    for (std::size_t k = 1; k <= eng.digits.size(); ++k) {
      prod *= eng.digits[k - 1];
      const Rational rem = x - reconstruct(eng, k);
      Rational bound(1, prod);
      bound.canonicalize();
      CHECK(sgn(rem) >= 0);
      CHECK(rem < bound);
    }

    // Modified kind: exact prefix identity whether or not it terminates.
    const auto mod = modified_engel_expand(x, 20);
    if (mod.terminated) {
      CHECK(reconstruct(mod, mod.digits.size()) == x);
    } else {
      const Rational rem = x - reconstruct(mod, mod.digits.size());
      BigInt denom = mod.digits.back();
      for (const auto& d : mod.digits) denom *= d - 1;
      Rational bound(1, denom);
      bound.canonicalize();
      CHECK(sgn(rem) > 0);
      CHECK(rem < bound);
    }
  }
}

TEST_CASE("digit cells are left-closed") {
  for (long j = 2; j <= 12; ++j) {
    CHECK(detail::digit_of(rat(1, j)) == j);
    // just inside the cell from above
    CHECK(detail::digit_of(rat(1, j) + rat(1, 1000 * j * j)) == j);
    // the upper cell boundary belongs to the next cell down
    CHECK(detail::digit_of(rat(1, j - 1)) == (j == 2 ? 1 : j - 1));
  }
  // First-digit cell [1/j, 1/(j-1)) has Lebesgue measure 1/(j(j-1)).
  for (long j = 2; j <= 12; ++j) {
    CHECK(rat(1, j - 1) - rat(1, j) == rat(1, j * (j - 1)));
  }
}

TEST_CASE("certified extraction on the worked intervals") {
  // [3/8, 3/8 + 2^-20]: shares [3, 8] with the exact expansion of 3/8.
  {
    BigInt m = BigInt(3) << 17;  // 3/8 = (3 * 2^17) / 2^20
    const auto iv = make_dyadic(m, 20);
    CHECK(iv.lower == rat(3, 8));
    const auto seq = expand_certified(iv, ExpansionKind::Engel, 10);
    CHECK(as_longs(seq) == std::vector<long>{3, 8});
    CHECK_FALSE(seq.terminated);
  }
  // [1/4, 1/2]: first digits disagree (4 vs 2), so nothing is certified.
  {
    const auto iv = make_dyadic(BigInt(1), 2);
    CHECK(iv.lower == rat(1, 4));
    CHECK(iv.upper == rat(1, 2));
    const auto seq = expand_certified(iv, ExpansionKind::Engel, 10);
    CHECK(seq.digits.empty());
  }
  // Width 2^-256 at 7/10, modified kind. 7/10 terminates with [2, 5] and is
  // the left edge of the second-digit cell, so an interval CONTAINING it
  // straddles d2 = 5 and d2 = 6 and only [2] is certain; the cell just
  // above 7/10 certifies [2, 5].
  {
    BigInt num = 7;
    num <<= 256;
    const BigInt m = floor_div(num, BigInt(10));
    const auto containing = make_dyadic(m, 256);
    CHECK(containing.lower <= rat(7, 10));
    CHECK(containing.upper >= rat(7, 10));
    const auto ambiguous = expand_certified(containing, ExpansionKind::ModifiedEngel, 4);
    REQUIRE(ambiguous.digits.size() == 1);
    CHECK(ambiguous.digits[0] == 2);

    const auto above = make_dyadic(m + 1, 256);
    const auto seq = expand_certified(above, ExpansionKind::ModifiedEngel, 2);
    REQUIRE(seq.digits.size() == 2);
    CHECK(seq.digits[0] == 2);
    CHECK(seq.digits[1] == 5);
  }
}

TEST_CASE("certified digits are a prefix of any interior rational's expansion") {
  RngStream rng(99, 0);
  for (int t = 0; t < 50; ++t) {
    const BigInt m = rng.random_bits(48);
    if (m == 0 || m + 1 == BigInt(1) << 48) continue;
    const auto iv = make_dyadic(m, 48);
    for (const auto kind : {ExpansionKind::Engel, ExpansionKind::ModifiedEngel}) {
      const auto cert = expand_certified(iv, kind, 6);
      // midpoint of the interval is interior
      Rational mid = (iv.lower + iv.upper) / 2;
      mid.canonicalize();
      const auto full = kind == ExpansionKind::Engel
                            ? engel_expand(mid, cert.digits.size() + 2)
                            : modified_engel_expand(mid, cert.digits.size() + 2);
      REQUIRE(full.digits.size() >= cert.digits.size());
      for (std::size_t i = 0; i < cert.digits.size(); ++i) {
        CHECK(cert.digits[i] == full.digits[i]);
      }
    }
  }
}

TEST_CASE("certified extraction rejects intervals touching the boundary") {
  CHECK_THROWS_AS(expand_certified(make_dyadic(BigInt(0), 4), ExpansionKind::Engel, 3),
                  std::domain_error);
  CHECK_THROWS_AS(expand_certified(make_dyadic(BigInt(15), 4), ExpansionKind::Engel, 3),
                  std::domain_error);
}
