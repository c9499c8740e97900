#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "eldp/common.hpp"
#include "eldp/digits.hpp"
#include "eldp/rational.hpp"
#include "eldp/rng.hpp"

namespace eldp {

// Family C: strictly increasing chain started at C_0 = c >= 1 with
//   p_ij = i / (j(j-1)) for j >= i+1.
// Family A: non-decreasing chain started at A_0 = a >= 2 with
//   p_ij = (i-1) / (j(j-1)) for j >= i >= 2.
enum class Family { C, A };

struct ProcessKind {
  Family family = Family::C;
  std::uint64_t initial = 1;

  static ProcessKind c_process(std::uint64_t c = 1);
  static ProcessKind a_process(std::uint64_t a = 2);
};

// Sampled trajectory; states[0] is the initial state. Family C paths are
// strictly increasing, family A paths non-decreasing (asserted on build).
struct ProcessPath {
  ProcessKind kind;
  std::vector<BigInt> states;
};

// Trajectory coupled to its i.i.d. exponential increments W_n and their
// partial sums B*_n = W_1 + ... + W_n. With the default starts,
// log C_n > B*_n and log a_n <= B*_n hold deterministically
// (a_n = states[n] - 1 for family A).
struct CoupledPath {
  ProcessKind kind;
  std::vector<double> increments;    // increments[n-1] = W_n
  std::vector<double> partial_sums;  // partial_sums[n-1] = B*_n
  std::vector<BigInt> states;        // states[0] = initial
};

// One transition from state i >= 1 driven by a uniform u in (0,1]:
// floor(i/u) + 1. Tail identity: P(result > j) = i/j for j >= i, hence
// P(result = j) = i/(j(j-1)) for j >= i+1.
BigInt step_c(const BigInt& i, const Rational& u);
std::uint64_t step_c(std::uint64_t i, double u);

// One transition from state i >= 2: floor((i-1)/u) + 1, realizing
// P(result > j) = (i-1)/j for j >= i-1; in particular P(stay) = 1/i.
BigInt step_a(const BigInt& i, const Rational& u);
std::uint64_t step_a(std::uint64_t i, double u);

// Exact-arithmetic uniform mode for samplers. `Float53` draws u as a
// 53-bit double (converted exactly to a dyadic rational for the state
// update); `ExactBits` draws u as a k-bit random rational.
struct UniformMode {
  enum class Kind { Float53, ExactBits } kind = Kind::Float53;
  unsigned long exact_bits = 128;
  static UniformMode float53() { return {}; }
  static UniformMode exact(unsigned long bits = 128) {
    return {Kind::ExactBits, bits};
  }
};

// Path of length n+1 from iterating the closed-form step. States are exact
// big integers; deterministic given the stream.
ProcessPath sample_path_transition(ProcessKind kind, std::size_t n, RngStream& rng,
                                   UniformMode mode = UniformMode::float53());

// Path built through the exponential-increment coupling
//   C_n = floor(C_{n-1} e^{W_n}) + 1,   a_n = floor(a_{n-1} e^{W_n}),
// with W_n = -log u_n, so e^{W_n} = 1/u_n exactly and the floors are exact.
// Stated only for the default starts (C_0 = 1, A_0 = 2); any other initial
// raises unsupported_error.
CoupledPath sample_path_coupled(ProcessKind kind, std::size_t n, RngStream& rng,
                                UniformMode mode = UniformMode::float53());

// Record times of a stream: L_0 = 1 and L_{k+1} = min{ j > L_k : x_j > x_{L_k} }.
// Ties do not produce records. Returns the family-C path [1, L_1, L_2, ...]
// of 1-based indices; throws std::domain_error on an empty stream.
ProcessPath record_times(std::span<const double> stream);

// Digit sequence of a uniformly random real, via certified extraction from
// a lazily extended random dyadic interval. The digit law equals the
// corresponding chain law (family A for Engel digits, family C for
// modified-Engel digits). Throws budget_exhausted carrying the digits
// already certified if more than bit_budget random bits would be needed.
struct budget_exhausted : resource_error {
  explicit budget_exhausted(DigitSequence partial_digits)
      : resource_error("bit budget exhausted before all digits were certified"),
        partial(std::move(partial_digits)) {}
  DigitSequence partial;
};

DigitSequence sample_digits_uniform(ExpansionKind kind, std::size_t n_digits,
                                    RngStream& rng, unsigned long bit_budget = 4096);

// Fast stepper for Monte Carlo over tail events: exact integer transitions
// while the state fits comfortably in a double, after which only log-state
// is advanced (the floor+1 correction is below 2^-50 per step there).
class LogStateWalker {
 public:
  explicit LogStateWalker(ProcessKind kind);
  void reset();
  void step(double u);
  double log_state() const;
  std::uint64_t steps_taken() const { return steps_; }

 private:
  ProcessKind kind_;
  double state_ = 0;      // exact while saturated_ is false
  double log_state_ = 0;  // tracked after saturation
  bool saturated_ = false;
  std::uint64_t steps_ = 0;
};

}  // namespace eldp
