#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <vector>

#include "eldp/stats.hpp"

using namespace eldp;

TEST_CASE("chi-square survival function against table quantiles") {
  // 95th percentiles: dof 1 -> 3.8415, dof 10 -> 18.307, dof 20 -> 31.410.
  CHECK(chisq_sf(3.841458820694124, 1) == doctest::Approx(0.05).epsilon(1e-6));
  CHECK(chisq_sf(18.307038053275146, 10) == doctest::Approx(0.05).epsilon(1e-6));
  CHECK(chisq_sf(31.410432844230918, 20) == doctest::Approx(0.05).epsilon(1e-6));
  CHECK(chisq_sf(0.0, 5) == 1.0);
  CHECK(chisq_sf(6.251388631170325, 3) == doctest::Approx(0.1).epsilon(1e-6));
}

TEST_CASE("survival function decreases in the statistic") {
  double prev = 1.0;
  for (double s = 0.5; s < 50.0; s += 0.5) {
    const double p = chisq_sf(s, 7);
    CHECK(p <= prev);
    prev = p;
  }
}

TEST_CASE("pearson chi-square behaves at the extremes") {
  const std::vector<double> expected = {100, 200, 300, 400};
  {
    const auto res = pearson_chisq(expected, expected);
    CHECK(res.statistic == 0.0);
    CHECK(res.p_value == 1.0);
    CHECK(res.dof == 3);
  }
  {
    const std::vector<double> off = {400, 300, 200, 100};
    const auto res = pearson_chisq(off, expected);
    CHECK(res.p_value < 1e-10);
  }
  const std::vector<double> sparse = {1, 2, 3, 994};
  CHECK_THROWS_AS(pearson_chisq(sparse, sparse), std::domain_error);
}

TEST_CASE("two-sample chi-square") {
  const std::vector<double> a = {500, 250, 125, 125};
  const std::vector<double> b = {510, 245, 120, 125};
  const auto close = two_sample_chisq(a, b);
  CHECK(close.p_value > 0.5);

  const std::vector<double> c = {125, 125, 250, 500};
  const auto far = two_sample_chisq(a, c);
  CHECK(far.p_value < 1e-10);
}
