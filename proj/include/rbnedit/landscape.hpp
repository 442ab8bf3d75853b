// NK and NKCS fitness landscapes: per-trait epistasis neighbor lists plus
// uniform-random fitness lookup tables.
//
// Table keying is fixed as: own trait bit first (most significant), then
// the K own-trait neighbors in stored order, then for NKCS the C partner
// neighbors of partner 0, partner 1, ... in stored order, least
// significant last. Table entries are uniform on [0,1).

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rbnedit/rng.hpp"

namespace rbnedit {

struct NkLandscape {
  int n = 0;  // trait count
  int k = 0;  // epistasis degree
  std::vector<std::vector<int>> neighbors;  // [trait][k], distinct, never self
  std::vector<std::vector<double>> table;   // [trait][2^(k+1)]

  bool operator==(const NkLandscape&) const = default;
};

struct NkcsLandscape {
  int n = 0;
  int k = 0;
  int c = 0;  // couplings per partner
  int s = 0;  // partner count
  std::vector<std::vector<int>> neighbors;  // [trait][k]
  // [trait][partner][c], distinct within each partner list
  std::vector<std::vector<std::vector<int>>> partner_neighbors;
  std::vector<std::vector<double>> table;  // [trait][2^(k+1+c*s)]

  bool operator==(const NkcsLandscape&) const = default;
};

NkLandscape generate_nk(int n, int k, RngStream& rng);
NkcsLandscape generate_nkcs(int n, int k, int c, int s, RngStream& rng);

double evaluate_nk(const NkLandscape& l, std::span<const std::uint8_t> traits);
double evaluate_nkcs(const NkcsLandscape& l, std::span<const std::uint8_t> own,
                     std::span<const std::span<const std::uint8_t>> partners);

// Convenience for the common S=1 case.
double evaluate_nkcs1(const NkcsLandscape& l, std::span<const std::uint8_t> own,
                      std::span<const std::uint8_t> partner);

// Versioned text serialization (hex floats, bit-exact round trip).
std::string nk_to_text(const NkLandscape& l);
NkLandscape nk_from_text(const std::string& text);
std::string nkcs_to_text(const NkcsLandscape& l);
NkcsLandscape nkcs_from_text(const std::string& text);

}  // namespace rbnedit
