// Deterministic, splittable random number streams.
//
// Every source of randomness in the simulator is an explicit RngStream.
// A stream is identified by a 64-bit derivation key; child streams are
// derived from (parent key, label) only, never from the parent's draw
// position, so the full experiment output is a pure function of the root
// seed and the set of labels. The generator is SplitMix64 (Steele, Lea &
// Flood 2014): pure 64-bit integer arithmetic, identical sequences on
// every platform.

#pragma once

#include <cstdint>
#include <string_view>

namespace rbnedit {

class RngStream {
 public:
  RngStream() : RngStream(0) {}

  static RngStream from_seed(std::uint64_t seed);

  // Pure function of (this stream's key, label); drawing from the parent
  // before or after deriving makes no difference.
  RngStream derive(std::string_view label) const;

  std::uint64_t next_u64();

  // Uniform on [0,1), 53 random mantissa bits.
  double next_unit();

  // Uniform on {0,...,n-1}, unbiased via rejection. Throws
  // std::invalid_argument if n == 0.
  std::uint64_t next_index(std::uint64_t n);

  std::uint64_t key() const { return key_; }

 private:
  explicit RngStream(std::uint64_t key) : key_(key), state_(key) {}

  std::uint64_t key_;    // derivation identity, never advanced
  std::uint64_t state_;  // sequence position
};

}  // namespace rbnedit
