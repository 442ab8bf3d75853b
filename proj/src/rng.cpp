#include "rbnedit/rng.hpp"

#include <stdexcept>

namespace rbnedit {
namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// SplitMix64 finalizer; bijective on 64-bit words.
std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z;
}

std::uint64_t hash_label(std::string_view label) {
  // FNV-1a over the label bytes, then one mixing round.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : label) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return mix64(h);
}

}  // namespace

RngStream RngStream::from_seed(std::uint64_t seed) {
  return RngStream(mix64(seed + kGolden));
}

RngStream RngStream::derive(std::string_view label) const {
  return RngStream(mix64(key_ ^ hash_label(label)));
}

std::uint64_t RngStream::next_u64() {
  state_ += kGolden;
  return mix64(state_);
}

double RngStream::next_unit() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t RngStream::next_index(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("RngStream::next_index: n must be >= 1");
  // Reject the low remainder zone so every residue is equally likely.
  const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
  for (;;) {
    const std::uint64_t x = next_u64();
    if (x >= threshold) return x % n;
  }
}

}  // namespace rbnedit
