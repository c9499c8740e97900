#pragma once

#include <cstddef>
#include <span>

namespace eldp {

// Regularized upper incomplete gamma Q(a, x) = Gamma(a, x) / Gamma(a),
// series/continued-fraction split as usual.
double gamma_q(double a, double x);

// Survival function of the chi-square distribution with dof degrees of
// freedom: P(X >= stat).
double chisq_sf(double stat, std::size_t dof);

struct GofResult {
  double statistic = 0.0;
  std::size_t dof = 0;
  double p_value = 1.0;
};

// Pearson chi-square of observed counts against expected counts
// (same total). Throws std::domain_error if any expected count is < 5.
GofResult pearson_chisq(std::span<const double> observed,
                        std::span<const double> expected);

// Two-sample chi-square for equal-size samples binned identically:
// sum (o1 - o2)^2 / (o1 + o2) with dof = bins - 1. Bins where both counts
// are zero are skipped.
GofResult two_sample_chisq(std::span<const double> counts1,
                           std::span<const double> counts2);

}  // namespace eldp
