#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "eldp/chains.hpp"

namespace eldp {

// Rate functions for the normalized log-state deviation (log X_n - n)/n.
// +infinity is a first-class value (IEEE inf).
//
//   family C (any initial state):
//     I_C(x) = x - log(x+1)            for x > -1, +inf otherwise
//   family A started at 2:
//     I_A(x) = x - log(x+1)            for x > -1/2
//              -x - 1 + log 2          for -1 <= x <= -1/2
//              +inf                    for x < -1
//   family A started at a >= 2:
//     I_{A,a}(x) = x - log(x+1)        for x > -1 + 1/a
//                  (1-a)(x+1) + log a  for -1 <= x <= -1 + 1/a
//                  +inf                for x < -1
struct RateFamily {
  enum class Tag { C, A, AInitial } tag = Tag::C;
  std::uint64_t a = 2;

  static RateFamily c() { return {Tag::C, 1}; }
  static RateFamily a2() { return {Tag::A, 2}; }
  static RateFamily a_from(std::uint64_t a);
  static RateFamily of(ProcessKind kind);
};

double rate(RateFamily family, double x);

// Scaled log-moment-generating functions:
//   Lambda_C(theta) = -theta - log(1-theta)  for theta < 1, +inf otherwise
//   Lambda_A(theta) = -theta - log 2         for theta <= -1
//                     -theta - log(1-theta)  for -1 < theta < 1
//                     +inf                   for theta >= 1
double log_mgf_closed(Family family, double theta);

// Numerical Legendre transform sup_theta { theta x - lambda(theta) } of an
// extended-real convex lambda, by finite-bracket scan plus golden-section
// (the objective may have kinks), with one safeguarded Newton polish when
// the optimum looks smooth. Every probed point is retained as a
// certificate that supremum >= theta x - lambda(theta).
struct ConjugationResult {
  double x = 0.0;
  double supremum = 0.0;
  double argmax_theta = 0.0;
  std::size_t iterations = 0;
  std::vector<std::pair<double, double>> certificate;  // (theta, objective)
};

ConjugationResult legendre_numeric(const std::function<double(double)>& lambda,
                                   double x, double theta_lo, double theta_hi);

// Pointwise comparison of the two rate functions. gap = I_C - I_A with
// inf - finite = inf; both infinite compares as gap 0.
struct RateGapRow {
  double x = 0.0;
  double rate_c = 0.0;
  double rate_a = 0.0;
  double gap = 0.0;
};
std::vector<RateGapRow> compare_rates(std::span<const double> grid);

}  // namespace eldp
