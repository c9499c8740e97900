#include "eldp/ldp.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace eldp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Shared upper branch: guarantees bit-identical values wherever two
// families' closed forms coincide.
inline double shifted_exponential_rate(double x) { return x - std::log1p(x); }

}  // namespace

RateFamily RateFamily::a_from(std::uint64_t a) {
  if (a < 2) throw std::domain_error("family A initial state must be >= 2");
  return {Tag::AInitial, a};
}

RateFamily RateFamily::of(ProcessKind kind) {
  if (kind.family == Family::C) return c();
  return kind.initial == 2 ? a2() : a_from(kind.initial);
}

double rate(RateFamily family, double x) {
  switch (family.tag) {
    case RateFamily::Tag::C:
      return x > -1.0 ? shifted_exponential_rate(x) : kInf;
    case RateFamily::Tag::A:
      if (x > -0.5) return shifted_exponential_rate(x);
      if (x >= -1.0) return -x - 1.0 + M_LN2;
      return kInf;
    case RateFamily::Tag::AInitial: {
      const double a = static_cast<double>(family.a);
      const double knot = -1.0 + 1.0 / a;
      if (x > knot) return shifted_exponential_rate(x);
      if (x >= -1.0) return (1.0 - a) * (x + 1.0) + std::log(a);
      return kInf;
    }
  }
  return kInf;
}

double log_mgf_closed(Family family, double theta) {
  if (theta >= 1.0) return kInf;
  if (family == Family::A && theta <= -1.0) return -theta - M_LN2;
  return -theta - std::log1p(-theta);
}

ConjugationResult legendre_numeric(const std::function<double(double)>& lambda,
                                   double x, double theta_lo, double theta_hi) {
  if (!(theta_lo < theta_hi)) throw std::domain_error("empty theta domain");

  ConjugationResult res;
  res.x = x;

  auto objective = [&](double theta) {
    const double lv = lambda(theta);
    const double g = std::isinf(lv) && lv > 0 ? -kInf : theta * x - lv;
    res.certificate.emplace_back(theta, g);
    ++res.iterations;
    return g;
  };

  // Scan for the finite region and a starting bracket around the best point.
  constexpr int kScan = 128;
  double best_theta = theta_lo;
  double best_g = -kInf;
  std::vector<double> grid(kScan + 1);
  for (int k = 0; k <= kScan; ++k) {
    grid[k] = theta_lo + (theta_hi - theta_lo) * static_cast<double>(k) / kScan;
  }
  std::vector<double> gvals(kScan + 1);
  for (int k = 0; k <= kScan; ++k) {
    gvals[k] = objective(grid[k]);
    if (gvals[k] > best_g) {
      best_g = gvals[k];
      best_theta = grid[k];
    }
  }
  if (best_g == -kInf) {
    throw std::domain_error("lambda is infinite on the entire theta domain");
  }

  // Bracket [a, b] around the best scan point.
  int best_k = 0;
  for (int k = 0; k <= kScan; ++k) {
    if (gvals[k] == best_g && grid[k] == best_theta) best_k = k;
  }
  double a = grid[std::max(0, best_k - 1)];
  double b = grid[std::min(kScan, best_k + 1)];

  // Golden-section on the concave objective; kinks are fine.
  constexpr double kGolden = 0.6180339887498949;
  constexpr double kTol = 1e-12;
  double c = b - kGolden * (b - a);
  double d = a + kGolden * (b - a);
  double gc = objective(c);
  double gd = objective(d);
  while (b - a > kTol) {
    if (gc >= gd) {
      b = d;
      d = c;
      gd = gc;
      c = b - kGolden * (b - a);
      gc = objective(c);
    } else {
      a = c;
      c = d;
      gc = gd;
      d = a + kGolden * (b - a);
      gd = objective(d);
    }
  }
  double theta_star = 0.5 * (a + b);
  double g_star = objective(theta_star);

  // One safeguarded Newton polish via central differences; kept only if the
  // curvature is sane and the step improves the objective inside [a, b].
  const double h = 1e-6 * std::max(1.0, std::abs(theta_star));
  const double gp = objective(theta_star + h);
  const double gm = objective(theta_star - h);
  if (std::isfinite(gp) && std::isfinite(gm)) {
    const double d1 = (gp - gm) / (2 * h);
    const double d2 = (gp - 2 * g_star + gm) / (h * h);
    if (d2 < -1e-12) {
      const double cand = theta_star - d1 / d2;
      if (cand > a && cand < b) {
        const double gcand = objective(cand);
        if (gcand > g_star) {
          theta_star = cand;
          g_star = gcand;
        }
      }
    }
  }

  for (const auto& [theta, g] : res.certificate) {
    if (g > g_star) {  // supremum dominates every probe
      g_star = g;
      theta_star = theta;
    }
  }
  res.supremum = g_star;
  res.argmax_theta = theta_star;
  return res;
}

std::vector<RateGapRow> compare_rates(std::span<const double> grid) {
  std::vector<RateGapRow> rows;
  rows.reserve(grid.size());
  for (double x : grid) {
    RateGapRow row;
    row.x = x;
    row.rate_c = rate(RateFamily::c(), x);
    row.rate_a = rate(RateFamily::a2(), x);
    if (std::isinf(row.rate_c) && std::isinf(row.rate_a)) {
      row.gap = 0.0;  // both walls; inf - inf treated as no gap
    } else {
      row.gap = row.rate_c - row.rate_a;
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace eldp
