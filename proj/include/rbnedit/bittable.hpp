// Bit-packed Boolean truth table: one output bit per input row.

#pragma once

#include <cstdint>
#include <vector>

#include "rbnedit/rng.hpp"

namespace rbnedit {

class TruthTable {
 public:
  TruthTable() = default;

  explicit TruthTable(std::uint32_t rows)
      : rows_(rows), words_((rows + 63) / 64, 0) {}

  static TruthTable random(std::uint32_t rows, RngStream& rng) {
    TruthTable t(rows);
    for (std::uint32_t r = 0; r < rows; ++r) {
      if (rng.next_index(2) == 1) t.set(r, 1);
    }
    return t;
  }

  std::uint32_t rows() const { return rows_; }

  int get(std::uint32_t row) const {
    return static_cast<int>((words_[row >> 6] >> (row & 63)) & 1u);
  }

  void set(std::uint32_t row, int bit) {
    const std::uint64_t mask = std::uint64_t{1} << (row & 63);
    if (bit)
      words_[row >> 6] |= mask;
    else
      words_[row >> 6] &= ~mask;
  }

  void flip(std::uint32_t row) { words_[row >> 6] ^= std::uint64_t{1} << (row & 63); }

  std::uint32_t popcount() const {
    std::uint32_t n = 0;
    for (std::uint64_t w : words_) n += static_cast<std::uint32_t>(__builtin_popcountll(w));
    return n;
  }

  const std::vector<std::uint64_t>& words() const { return words_; }
  std::vector<std::uint64_t>& words() { return words_; }

  bool operator==(const TruthTable&) const = default;

 private:
  std::uint32_t rows_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace rbnedit
