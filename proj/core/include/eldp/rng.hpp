#pragma once

#include <array>
#include <cstdint>

#include "eldp/rational.hpp"

namespace eldp {

// Philox4x32-10 block function. Counter-based: every 128-bit counter value
// maps independently to 128 output bits, so streams can be split and
// fast-forwarded without touching state.
std::array<std::uint32_t, 4> philox4x32(const std::array<std::uint32_t, 4>& counter,
                                        const std::array<std::uint32_t, 2>& key);

// A deterministic random stream identified by (seed, stream_index).
// The 64-bit key is the seed; the counter holds (block, stream_index).
// Identical (seed, stream) always reproduces the identical bit sequence,
// and distinct stream indices give statistically independent streams.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_index)
      : seed_(seed), stream_(stream_index) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_index() const { return stream_; }

  std::uint32_t next_u32();
  std::uint64_t next_u64();

  // Uniform on (0, 1], 53 significant bits. Never returns 0, so -log(u)
  // is always finite.
  double uniform_open01();

  // Exponential(mean 1) increment, -log(uniform_open01()).
  double exponential();

  // k random bits as an integer in [0, 2^k).
  BigInt random_bits(unsigned long k);

  // Exact-mode uniform: (m + 1) / 2^k for a k-bit random m, in (0, 1].
  Rational uniform_rational(unsigned long k);

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  unsigned buffer_pos_ = 4;  // empty
};

}  // namespace eldp
