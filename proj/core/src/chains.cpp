#include "eldp/chains.hpp"

#include <cmath>
#include <stdexcept>

namespace eldp {

namespace {

void check_u(const Rational& u) {
  if (sgn(u) <= 0 || u > 1) throw std::domain_error("uniform variate must lie in (0,1]");
}

BigInt floor_ratio(const BigInt& num, const Rational& u) {
  // floor(num / u) with u = p/q in lowest terms: floor(num * q / p).
  return floor_div(num * u.get_den(), u.get_num());
}

Rational exact_uniform(RngStream& rng, const UniformMode& mode) {
  if (mode.kind == UniformMode::Kind::ExactBits) {
    return rng.uniform_rational(mode.exact_bits);
  }
  Rational u(rng.uniform_open01());  // dyadic, exact
  u.canonicalize();
  return u;
}

void check_path_monotone(const ProcessPath& path) {
  for (std::size_t i = 1; i < path.states.size(); ++i) {
    const bool ok = path.kind.family == Family::C
                        ? path.states[i] >= path.states[i - 1] + 1
                        : path.states[i] >= path.states[i - 1];
    if (!ok) throw std::logic_error("path violates family monotonicity");
  }
}

}  // namespace

ProcessKind ProcessKind::c_process(std::uint64_t c) {
  if (c < 1) throw std::domain_error("family C initial state must be >= 1");
  return {Family::C, c};
}

ProcessKind ProcessKind::a_process(std::uint64_t a) {
  if (a < 2) throw std::domain_error("family A initial state must be >= 2");
  return {Family::A, a};
}

BigInt step_c(const BigInt& i, const Rational& u) {
  if (i < 1) throw std::domain_error("step_c needs state >= 1");
  check_u(u);
  return floor_ratio(i, u) + 1;
}

std::uint64_t step_c(std::uint64_t i, double u) {
  if (i < 1) throw std::domain_error("step_c needs state >= 1");
  if (!(u > 0.0 && u <= 1.0)) throw std::domain_error("uniform variate must lie in (0,1]");
  const double y = static_cast<double>(i) / u;
  if (y >= 0x1.0p62) throw std::overflow_error("step_c: state overflows 64 bits");
  return static_cast<std::uint64_t>(y) + 1;
}

BigInt step_a(const BigInt& i, const Rational& u) {
  if (i < 2) throw std::domain_error("step_a needs state >= 2");
  check_u(u);
  return floor_ratio(i - 1, u) + 1;
}

std::uint64_t step_a(std::uint64_t i, double u) {
  if (i < 2) throw std::domain_error("step_a needs state >= 2");
  if (!(u > 0.0 && u <= 1.0)) throw std::domain_error("uniform variate must lie in (0,1]");
  const double y = static_cast<double>(i - 1) / u;
  if (y >= 0x1.0p62) throw std::overflow_error("step_a: state overflows 64 bits");
  return static_cast<std::uint64_t>(y) + 1;
}

ProcessPath sample_path_transition(ProcessKind kind, std::size_t n, RngStream& rng,
                                   UniformMode mode) {
  if (n < 1) throw std::domain_error("path length must be >= 1");
  ProcessPath path;
  path.kind = kind;
  path.states.reserve(n + 1);
  path.states.emplace_back(static_cast<unsigned long>(kind.initial));
  for (std::size_t k = 0; k < n; ++k) {
    const Rational u = exact_uniform(rng, mode);
    const BigInt& cur = path.states.back();
    path.states.push_back(kind.family == Family::C ? step_c(cur, u) : step_a(cur, u));
  }
  check_path_monotone(path);
  return path;
}

CoupledPath sample_path_coupled(ProcessKind kind, std::size_t n, RngStream& rng,
                                UniformMode mode) {
  if (n < 1) throw std::domain_error("path length must be >= 1");
  const std::uint64_t default_initial = kind.family == Family::C ? 1 : 2;
  if (kind.initial != default_initial) {
    throw unsupported_error("the exponential-increment coupling is stated only for the default start");
  }
  CoupledPath path;
  path.kind = kind;
  path.states.emplace_back(static_cast<unsigned long>(kind.initial));
  path.increments.reserve(n);
  path.partial_sums.reserve(n);
  double bsum = 0.0;
  // Work on c_n, or on a_n = A_n - 1 for family A; both recurse as
  // x_n = floor(x_{n-1} / u_n) with x_0 = 1.
  BigInt x = 1;
  for (std::size_t k = 0; k < n; ++k) {
    const Rational u = exact_uniform(rng, mode);
    const double w = -std::log(u.get_d());
    bsum += w;
    path.increments.push_back(w);
    path.partial_sums.push_back(bsum);
    x = floor_ratio(x, u);
    if (kind.family == Family::C) {
      path.states.push_back(x + 1);
      x = path.states.back();
    } else {
      path.states.push_back(x + 1);  // A_n = a_n + 1
    }
  }
  return path;
}

ProcessPath record_times(std::span<const double> stream) {
  if (stream.empty()) throw std::domain_error("record_times needs a non-empty stream");
  ProcessPath path;
  path.kind = ProcessKind::c_process(1);
  path.states.emplace_back(1);
  double best = stream[0];
  for (std::size_t j = 1; j < stream.size(); ++j) {
    if (stream[j] > best) {
      best = stream[j];
      path.states.emplace_back(static_cast<unsigned long>(j + 1));
    }
  }
  check_path_monotone(path);
  return path;
}

DigitSequence sample_digits_uniform(ExpansionKind kind, std::size_t n_digits,
                                    RngStream& rng, unsigned long bit_budget) {
  if (n_digits < 1) throw std::domain_error("n_digits must be >= 1");
  constexpr unsigned long kChunk = 64;

  DigitSequence seq;
  seq.kind = kind;
  unsigned long bits = 0;
  BigInt mantissa = 0;
  // Residual interval after the emitted digits, as the affine image
  // u = alpha * x - beta of the original dyadic interval.
  Rational alpha = 1, beta = 0;

  while (seq.digits.size() < n_digits) {
    if (bits + kChunk > bit_budget) throw budget_exhausted(seq);
    mantissa <<= kChunk;
    mantissa += rng.random_bits(kChunk);
    bits += kChunk;

    BigInt den = 1;
    den <<= bits;
    if (mantissa == 0 || mantissa + 1 == den) continue;  // interval touches 0 or 1
    Rational lo(mantissa, den), hi(mantissa + 1, den);
    lo.canonicalize();
    hi.canonicalize();
    Rational r_lo = alpha * lo - beta;
    Rational r_hi = alpha * hi - beta;
    r_lo.canonicalize();
    r_hi.canonicalize();

    while (seq.digits.size() < n_digits && sgn(r_lo) > 0 && r_hi < 1) {
      const BigInt d_lo = detail::digit_of(r_lo);
      if (d_lo != detail::digit_of(r_hi)) break;
      seq.digits.push_back(d_lo);
      r_lo = detail::remainder_step(kind, r_lo, d_lo);
      r_hi = detail::remainder_step(kind, r_hi, d_lo);
      if (kind == ExpansionKind::Engel) {
        alpha *= Rational(d_lo);
        beta = beta * Rational(d_lo) + 1;
      } else {
        const Rational f(d_lo - 1);
        alpha *= f;
        beta = f * (beta + Rational(1, d_lo));
      }
      alpha.canonicalize();
      beta.canonicalize();
    }
  }
  return seq;
}

LogStateWalker::LogStateWalker(ProcessKind kind) : kind_(kind) { reset(); }

void LogStateWalker::reset() {
  state_ = static_cast<double>(kind_.initial);
  log_state_ = std::log(state_);
  saturated_ = false;
  steps_ = 0;
}

void LogStateWalker::step(double u) {
  constexpr double kSaturation = 0x1.0p51;
  ++steps_;
  if (!saturated_) {
    const double base = kind_.family == Family::C ? state_ : state_ - 1;
    const double y = base / u;
    if (y < kSaturation) {
      state_ = std::floor(y) + 1;
      log_state_ = std::log(state_);
      return;
    }
    saturated_ = true;
    log_state_ = std::log(base);
  }
  // floor(y)+1 lies in (y, y+1]; at y > 2^51 the correction to log y is
  // below 2^-50 and is dropped.
  log_state_ -= std::log(u);
}

double LogStateWalker::log_state() const { return log_state_; }

}  // namespace eldp
