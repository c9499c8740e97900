#include "eldp/stats.hpp"

#include <cmath>
#include <stdexcept>

namespace eldp {

namespace {

double gamma_p_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int n = 1; n < 10000; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::abs(term) < std::abs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q_contfrac(double a, double x) {
  // Lentz's method on the standard continued fraction.
  constexpr double kTiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double gamma_q(double a, double x) {
  if (a <= 0.0 || x < 0.0) throw std::domain_error("gamma_q needs a > 0, x >= 0");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_contfrac(a, x);
}

double chisq_sf(double stat, std::size_t dof) {
  if (dof == 0) throw std::domain_error("chi-square needs dof >= 1");
  if (stat <= 0.0) return 1.0;
  return gamma_q(0.5 * static_cast<double>(dof), 0.5 * stat);
}

GofResult pearson_chisq(std::span<const double> observed,
                        std::span<const double> expected) {
  if (observed.size() != expected.size() || observed.empty()) {
    throw std::domain_error("pearson_chisq needs matching non-empty count vectors");
  }
  double stat = 0.0;
  for (std::size_t b = 0; b < observed.size(); ++b) {
    if (expected[b] < 5.0) {
      throw std::domain_error("expected count below 5 in a bin; rebin");
    }
    const double diff = observed[b] - expected[b];
    stat += diff * diff / expected[b];
  }
  GofResult res;
  res.statistic = stat;
  res.dof = observed.size() - 1;
  res.p_value = chisq_sf(stat, res.dof);
  return res;
}

GofResult two_sample_chisq(std::span<const double> counts1,
                           std::span<const double> counts2) {
  if (counts1.size() != counts2.size() || counts1.empty()) {
    throw std::domain_error("two_sample_chisq needs matching non-empty count vectors");
  }
  double stat = 0.0;
  std::size_t used = 0;
  for (std::size_t b = 0; b < counts1.size(); ++b) {
    const double tot = counts1[b] + counts2[b];
    if (tot <= 0.0) continue;
    const double diff = counts1[b] - counts2[b];
    stat += diff * diff / tot;
    ++used;
  }
  if (used < 2) throw std::domain_error("two_sample_chisq: fewer than two populated bins");
  GofResult res;
  res.statistic = stat;
  res.dof = used - 1;
  res.p_value = chisq_sf(stat, res.dof);
  return res;
}

}  // namespace eldp
