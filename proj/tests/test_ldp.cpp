#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <vector>

#include "eldp/ldp.hpp"

using namespace eldp;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("rate function values on pinned points") {
  CHECK(rate(RateFamily::c(), 0.0) == 0.0);
  CHECK(rate(RateFamily::c(), 0.5) == doctest::Approx(0.0945348918918356).epsilon(1e-12));
  CHECK(rate(RateFamily::c(), -1.0) == kInf);
  CHECK(rate(RateFamily::c(), -2.0) == kInf);

  CHECK(rate(RateFamily::a2(), -0.75) == doctest::Approx(0.4431471805599453).epsilon(1e-12));
  CHECK(rate(RateFamily::a2(), -1.0) == doctest::Approx(M_LN2).epsilon(1e-12));
  CHECK(rate(RateFamily::a2(), -1.0000001) == kInf);

  CHECK(rate(RateFamily::a_from(3), -1.0) == doctest::Approx(std::log(3.0)).epsilon(1e-12));
  CHECK(rate(RateFamily::a_from(3), -0.9) ==
        doctest::Approx(0.8986122886681098).epsilon(1e-12));
}

TEST_CASE("family A with a = 2 is the baseline A rate everywhere") {
  for (double x = -1.2; x <= 4.0; x += 0.01) {
    const double a2 = rate(RateFamily::a2(), x);
    const double gen = rate(RateFamily::a_from(2), x);
    if (std::isinf(a2)) {
      CHECK(std::isinf(gen));
    } else {
      CHECK(a2 == gen);
    }
  }
}

TEST_CASE("branch continuity at every knot") {
  const double eps = 1e-9;
  // I_A at -1/2: both branches give log 2 - 1/2.
  CHECK(rate(RateFamily::a2(), -0.5) == doctest::Approx(M_LN2 - 0.5).epsilon(1e-12));
  CHECK(std::abs(rate(RateFamily::a2(), -0.5 + eps) - rate(RateFamily::a2(), -0.5 - eps)) < 1e-8);
  // I_{A,a} at -1 + 1/a.
  for (const std::uint64_t a : {2ull, 3ull, 5ull, 17ull}) {
    const double knot = -1.0 + 1.0 / static_cast<double>(a);
    CHECK(std::abs(rate(RateFamily::a_from(a), knot + eps) -
                   rate(RateFamily::a_from(a), knot - eps)) < 1e-7);
  }
  // Lambda_A at theta = -1: both branches give 1 - log 2.
  CHECK(log_mgf_closed(Family::A, -1.0) == doctest::Approx(1.0 - M_LN2).epsilon(1e-12));
  CHECK(std::abs(log_mgf_closed(Family::A, -1.0 + eps) -
                 log_mgf_closed(Family::A, -1.0 - eps)) < 1e-8);
}

TEST_CASE("log-MGF closed forms") {
  CHECK(log_mgf_closed(Family::C, 0.0) == 0.0);
  CHECK(log_mgf_closed(Family::C, -1.0) == doctest::Approx(0.3068528194400547).epsilon(1e-12));
  CHECK(log_mgf_closed(Family::A, -2.0) == doctest::Approx(1.3068528194400547).epsilon(1e-12));
  CHECK(log_mgf_closed(Family::C, 1.0) == kInf);
  CHECK(log_mgf_closed(Family::A, 1.5) == kInf);
}

TEST_CASE("nonnegativity with a unique zero") {
  for (const auto fam : {RateFamily::c(), RateFamily::a2(), RateFamily::a_from(4)}) {
    for (double x = -0.999; x <= 4.0; x += 0.003) {
      const double v = rate(fam, x);
      CHECK(v >= 0.0);
      if (x != 0.0 && std::abs(x) > 1e-12) CHECK(v > 0.0);
    }
    CHECK(rate(fam, 0.0) == 0.0);
  }
}

TEST_CASE("convexity: second differences stay above -1e-9") {
  const double h = 1e-3;
  for (const auto fam : {RateFamily::c(), RateFamily::a2(), RateFamily::a_from(3)}) {
    for (double x = -0.99; x <= 3.0; x += 0.007) {
      const double d2 = rate(fam, x + h) - 2.0 * rate(fam, x) + rate(fam, x - h);
      if (std::isfinite(d2)) CHECK(d2 >= -1e-9);
    }
  }
}

TEST_CASE("numerical conjugation of the closed-form log-MGFs") {
  // Smooth interior optimum: x = 0.5, argmax theta = x/(x+1) = 1/3.
  {
    const auto res = legendre_numeric(
        [](double t) { return log_mgf_closed(Family::C, t); }, 0.5, -200.0, 1.0);
    CHECK(res.supremum == doctest::Approx(0.0945348918918356).epsilon(1e-8));
    CHECK(res.argmax_theta == doctest::Approx(1.0 / 3.0).epsilon(1e-4));
  }
  // Kink optimum: family A at x = -0.75 peaks exactly at theta = -1.
  {
    const auto res = legendre_numeric(
        [](double t) { return log_mgf_closed(Family::A, t); }, -0.75, -200.0, 1.0);
    CHECK(res.supremum == doctest::Approx(0.4431471805599453).epsilon(1e-8));
    CHECK(res.argmax_theta == doctest::Approx(-1.0).epsilon(1e-4));
  }
  // Trivial point.
  {
    const auto res = legendre_numeric(
        [](double t) { return log_mgf_closed(Family::C, t); }, 0.0, -200.0, 1.0);
    CHECK(std::abs(res.supremum) < 1e-10);
  }
}

TEST_CASE("conjugation certificate is dominated by the supremum") {
  const auto res = legendre_numeric(
      [](double t) { return log_mgf_closed(Family::A, t); }, -0.6, -100.0, 1.0);
  for (const auto& [theta, g] : res.certificate) {
    CHECK(res.supremum >= g);
  }
  CHECK(res.iterations == res.certificate.size());
}

TEST_CASE("conjugation rejects an everywhere-infinite domain") {
  CHECK_THROWS_AS(legendre_numeric([](double) { return kInf; }, 1.0, -10.0, 10.0),
                  std::domain_error);
}

TEST_CASE("rate gap table") {
  const std::vector<double> grid = {-1.5, -1.0, -0.75, -0.5, 0.0, 0.3, 2.0};
  const auto rows = compare_rates(grid);
  CHECK(rows[0].gap == 0.0);  // both infinite
  CHECK(rows[1].gap == kInf);
  CHECK(rows[2].gap == doctest::Approx(0.1931471805599453).epsilon(1e-12));
  CHECK(rows[3].gap == 0.0);
  CHECK(rows[4].gap == 0.0);
  CHECK(rows[5].gap == 0.0);
  CHECK(rows[6].gap == 0.0);
  for (const auto& row : rows) CHECK(row.gap >= 0.0);
}

TEST_CASE("initial-value family collapses to the C rate beyond its knot") {
  for (const std::uint64_t a : {2ull, 3ull, 10ull, 1000ull}) {
    for (double x = -0.95; x <= 3.0; x += 0.01) {
      if (x > -1.0 + 1.0 / static_cast<double>(a)) {
        CHECK(rate(RateFamily::a_from(a), x) == rate(RateFamily::c(), x));
      }
    }
  }
  // Agreement region for the baseline family: identical beyond -1/2.
  for (double x = -0.49; x <= 4.0; x += 0.01) {
    CHECK(rate(RateFamily::a2(), x) == rate(RateFamily::c(), x));
  }
}

TEST_CASE("double conjugation reproduces the a = 3 rate function") {
  // No closed-form log-MGF is asserted for general initial values; instead
  // conjugate twice and land back on the rate function.
  const auto lambda_hat = [](double theta) {
    const auto inner = legendre_numeric(
        [](double x) { return rate(RateFamily::a_from(3), x); }, theta, -1.0, 400.0);
    return inner.supremum;
  };
  for (const double x : {-0.95, -0.8, -0.7, -0.5, -0.2, 0.0, 0.4, 1.0, 2.5}) {
    const auto res = legendre_numeric(lambda_hat, x, -60.0, 0.96);
    CHECK(res.supremum == doctest::Approx(rate(RateFamily::a_from(3), x)).epsilon(1e-8));
  }
}
