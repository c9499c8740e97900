#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "eldp/rng.hpp"

using namespace eldp;

// Known-answer vectors for the 10-round philox4x32 block function.
TEST_CASE("philox4x32-10 known-answer vectors") {
  {
    const auto out = philox4x32({0, 0, 0, 0}, {0, 0});
    CHECK(out[0] == 0x6627e8d5u);
    CHECK(out[1] == 0xe169c58du);
    CHECK(out[2] == 0xbc57ac4cu);
    CHECK(out[3] == 0x9b00dbd8u);
  }
  {
    const auto out = philox4x32({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                                {0xffffffffu, 0xffffffffu});
    CHECK(out[0] == 0x408f276du);
    CHECK(out[1] == 0x41c83b0eu);
    CHECK(out[2] == 0xa20bc7c6u);
    CHECK(out[3] == 0x6d5451fdu);
  }
  {
    const auto out = philox4x32({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                                {0xa4093822u, 0x299f31d0u});
    CHECK(out[0] == 0xd16cfe09u);
    CHECK(out[1] == 0x94fdccebu);
    CHECK(out[2] == 0x5001e420u);
    CHECK(out[3] == 0x24126ea1u);
  }
}

TEST_CASE("streams are reproducible and distinct") {
  RngStream a(42, 7);
  RngStream b(42, 7);
  RngStream c(42, 8);
  bool all_equal = true;
  bool any_diff_stream = false;
  for (int i = 0; i < 1000; ++i) {
    const auto va = a.next_u64();
    if (va != b.next_u64()) all_equal = false;
    if (va != c.next_u64()) any_diff_stream = true;
  }
  CHECK(all_equal);
  CHECK(any_diff_stream);
}

TEST_CASE("uniform_open01 lies in (0,1] and is roughly uniform") {
  RngStream rng(123, 0);
  double sum = 0.0;
  for (int i = 0; i < 200000; ++i) {
    const double u = rng.uniform_open01();
    REQUIRE(u > 0.0);
    REQUIRE(u <= 1.0);
    sum += u;
  }
  CHECK(sum / 200000 == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("random_bits and uniform_rational ranges") {
  RngStream rng(9, 3);
  for (int i = 0; i < 100; ++i) {
    const BigInt m = rng.random_bits(130);
    CHECK(sgn(m) >= 0);
    BigInt cap = 1;
    cap <<= 130;
    CHECK(m < cap);
  }
  for (int i = 0; i < 100; ++i) {
    const Rational u = rng.uniform_rational(128);
    CHECK(sgn(u) > 0);
    CHECK(u <= 1);
  }
}

TEST_CASE("exponential increments are positive with mean near 1") {
  RngStream rng(2024, 1);
  double sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double w = rng.exponential();
    REQUIRE(w >= 0.0);
    sum += w;
  }
  CHECK(sum / n == doctest::Approx(1.0).epsilon(0.02));
}
