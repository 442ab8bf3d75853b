// Brute-force fitness recomputation for cross-checking the landscape
// module: gathers bits into a list and builds the row index with
// place-value arithmetic instead of the shifted-key path.

#pragma once

#include <cstddef>
#include <vector>

#include "rbnedit/landscape.hpp"

namespace oracle {

inline double nk_fitness(const rbnedit::NkLandscape& l,
                         const std::vector<int>& traits) {
  double total = 0.0;
  for (int i = 0; i < l.n; ++i) {
    std::vector<int> bits;
    bits.push_back(traits[static_cast<std::size_t>(i)]);
    for (int nb : l.neighbors[static_cast<std::size_t>(i)])
      bits.push_back(traits[static_cast<std::size_t>(nb)]);
    std::size_t index = 0;
    for (int bit : bits) index = index * 2 + static_cast<std::size_t>(bit);
    total += l.table[static_cast<std::size_t>(i)][index];
  }
  return total / static_cast<double>(l.n);
}

inline double nkcs_fitness(const rbnedit::NkcsLandscape& l,
                           const std::vector<int>& own,
                           const std::vector<std::vector<int>>& partners) {
  double total = 0.0;
  for (int i = 0; i < l.n; ++i) {
    std::vector<int> bits;
    bits.push_back(own[static_cast<std::size_t>(i)]);
    for (int nb : l.neighbors[static_cast<std::size_t>(i)])
      bits.push_back(own[static_cast<std::size_t>(nb)]);
    for (int p = 0; p < l.s; ++p)
      for (int nb : l.partner_neighbors[static_cast<std::size_t>(i)]
                                       [static_cast<std::size_t>(p)])
        bits.push_back(
            partners[static_cast<std::size_t>(p)][static_cast<std::size_t>(nb)]);
    std::size_t index = 0;
    for (int bit : bits) index = index * 2 + static_cast<std::size_t>(bit);
    total += l.table[static_cast<std::size_t>(i)][index];
  }
  return total / static_cast<double>(l.n);
}

}  // namespace oracle
