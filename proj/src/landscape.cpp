#include "rbnedit/landscape.hpp"

#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace rbnedit {

namespace {

// K draws without replacement from {0..n-1} \ {self}, order preserved as drawn.
std::vector<int> draw_neighbors(int n, int k, int self, RngStream& rng) {
  std::vector<int> pool;
  pool.reserve(static_cast<std::size_t>(n) - 1);
  for (int t = 0; t < n; ++t)
    if (t != self) pool.push_back(t);
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(k));
  for (int d = 0; d < k; ++d) {
    std::uint64_t idx = rng.next_index(pool.size());
    out.push_back(pool[idx]);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(idx));
  }
  return out;
}

std::vector<double> draw_table(std::size_t rows, RngStream& rng) {
  std::vector<double> t(rows);
  for (auto& v : t) v = rng.next_unit();
  return t;
}

std::string double_to_hex(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%a", v);
  return buf;
}

double hex_to_double(const std::string& s) {
  const char* p = s.c_str();
  char* end = nullptr;
  double v = std::strtod(p, &end);
  if (end == p || *end != '\0')
    throw std::invalid_argument("landscape: bad float literal '" + s + "'");
  return v;
}

std::string next_line(std::istringstream& in, const char* what) {
  std::string line;
  if (!std::getline(in, line))
    throw std::invalid_argument(std::string("landscape: truncated input, expected ") + what);
  return line;
}

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

int parse_int(const std::string& s, const char* what) {
  try {
    std::size_t pos = 0;
    int v = std::stoi(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string("landscape: bad integer for ") + what + ": '" + s + "'");
  }
}

}  // namespace

NkLandscape generate_nk(int n, int k, RngStream& rng) {
  if (n < 1) throw std::invalid_argument("generate_nk: n must be >= 1");
  if (k < 0 || k > n - 1)
    throw std::invalid_argument("generate_nk: k must be in [0, n-1]");
  NkLandscape l;
  l.n = n;
  l.k = k;
  l.neighbors.resize(static_cast<std::size_t>(n));
  l.table.resize(static_cast<std::size_t>(n));
  const std::size_t rows = std::size_t{1} << (k + 1);
  for (int i = 0; i < n; ++i) {
    l.neighbors[static_cast<std::size_t>(i)] = draw_neighbors(n, k, i, rng);
    l.table[static_cast<std::size_t>(i)] = draw_table(rows, rng);
  }
  return l;
}

NkcsLandscape generate_nkcs(int n, int k, int c, int s, RngStream& rng) {
  if (n < 1) throw std::invalid_argument("generate_nkcs: n must be >= 1");
  if (k < 0 || k > n - 1)
    throw std::invalid_argument("generate_nkcs: k must be in [0, n-1]");
  if (c < 0 || c > n)
    throw std::invalid_argument("generate_nkcs: c must be in [0, n]");
  if (s < 1) throw std::invalid_argument("generate_nkcs: s must be >= 1");
  NkcsLandscape l;
  l.n = n;
  l.k = k;
  l.c = c;
  l.s = s;
  l.neighbors.resize(static_cast<std::size_t>(n));
  l.partner_neighbors.resize(static_cast<std::size_t>(n));
  l.table.resize(static_cast<std::size_t>(n));
  const std::size_t rows = std::size_t{1} << (k + 1 + c * s);
  for (int i = 0; i < n; ++i) {
    l.neighbors[static_cast<std::size_t>(i)] = draw_neighbors(n, k, i, rng);
    auto& pn = l.partner_neighbors[static_cast<std::size_t>(i)];
    pn.resize(static_cast<std::size_t>(s));
    for (int p = 0; p < s; ++p) {
      // Partner traits are indexed over the partner's whole trait vector, so
      // "without self" does not apply: draw c distinct values from {0..n-1}.
      std::vector<int> pool(static_cast<std::size_t>(n));
      for (int t = 0; t < n; ++t) pool[static_cast<std::size_t>(t)] = t;
      auto& lst = pn[static_cast<std::size_t>(p)];
      lst.reserve(static_cast<std::size_t>(c));
      for (int d = 0; d < c; ++d) {
        std::uint64_t idx = rng.next_index(pool.size());
        lst.push_back(pool[idx]);
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(idx));
      }
    }
    l.table[static_cast<std::size_t>(i)] = draw_table(rows, rng);
  }
  return l;
}

double evaluate_nk(const NkLandscape& l, std::span<const std::uint8_t> traits) {
  if (static_cast<int>(traits.size()) != l.n)
    throw std::invalid_argument("evaluate_nk: trait vector size mismatch");
  double sum = 0.0;
  for (int i = 0; i < l.n; ++i) {
    std::size_t key = traits[static_cast<std::size_t>(i)] ? 1u : 0u;
    for (int nb : l.neighbors[static_cast<std::size_t>(i)])
      key = (key << 1) | (traits[static_cast<std::size_t>(nb)] ? 1u : 0u);
    sum += l.table[static_cast<std::size_t>(i)][key];
  }
  return sum / static_cast<double>(l.n);
}

double evaluate_nkcs(const NkcsLandscape& l, std::span<const std::uint8_t> own,
                     std::span<const std::span<const std::uint8_t>> partners) {
  if (static_cast<int>(own.size()) != l.n)
    throw std::invalid_argument("evaluate_nkcs: trait vector size mismatch");
  if (static_cast<int>(partners.size()) != l.s)
    throw std::invalid_argument("evaluate_nkcs: partner count mismatch");
  for (const auto& p : partners)
    if (static_cast<int>(p.size()) != l.n)
      throw std::invalid_argument("evaluate_nkcs: partner trait size mismatch");
  double sum = 0.0;
  for (int i = 0; i < l.n; ++i) {
    std::size_t key = own[static_cast<std::size_t>(i)] ? 1u : 0u;
    for (int nb : l.neighbors[static_cast<std::size_t>(i)])
      key = (key << 1) | (own[static_cast<std::size_t>(nb)] ? 1u : 0u);
    const auto& pn = l.partner_neighbors[static_cast<std::size_t>(i)];
    for (int p = 0; p < l.s; ++p)
      for (int nb : pn[static_cast<std::size_t>(p)])
        key = (key << 1) |
              (partners[static_cast<std::size_t>(p)][static_cast<std::size_t>(nb)] ? 1u : 0u);
    sum += l.table[static_cast<std::size_t>(i)][key];
  }
  return sum / static_cast<double>(l.n);
}

double evaluate_nkcs1(const NkcsLandscape& l, std::span<const std::uint8_t> own,
                      std::span<const std::uint8_t> partner) {
  std::span<const std::uint8_t> ps[1] = {partner};
  return evaluate_nkcs(l, own, std::span<const std::span<const std::uint8_t>>(ps, 1));
}

namespace {

void append_int_list(std::ostringstream& out, const std::vector<int>& v) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out << ' ';
    out << v[i];
  }
  out << '\n';
}

void append_table(std::ostringstream& out, const std::vector<double>& t) {
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) out << ' ';
    out << double_to_hex(t[i]);
  }
  out << '\n';
}

std::vector<int> parse_int_list(const std::string& line, std::size_t want, const char* what) {
  auto toks = split_ws(line);
  if (toks.size() != want)
    throw std::invalid_argument(std::string("landscape: wrong element count for ") + what);
  std::vector<int> out;
  out.reserve(toks.size());
  for (const auto& t : toks) out.push_back(parse_int(t, what));
  return out;
}

std::vector<double> parse_table(const std::string& line, std::size_t want) {
  auto toks = split_ws(line);
  if (toks.size() != want)
    throw std::invalid_argument("landscape: wrong table row count");
  std::vector<double> out;
  out.reserve(toks.size());
  for (const auto& t : toks) out.push_back(hex_to_double(t));
  return out;
}

}  // namespace

std::string nk_to_text(const NkLandscape& l) {
  std::ostringstream out;
  out << "rbnedit-landscape 1 nk\n";
  out << l.n << ' ' << l.k << '\n';
  for (int i = 0; i < l.n; ++i) {
    append_int_list(out, l.neighbors[static_cast<std::size_t>(i)]);
    append_table(out, l.table[static_cast<std::size_t>(i)]);
  }
  return out.str();
}

NkLandscape nk_from_text(const std::string& text) {
  std::istringstream in(text);
  if (next_line(in, "magic") != "rbnedit-landscape 1 nk")
    throw std::invalid_argument("landscape: bad magic line for nk");
  auto dims = split_ws(next_line(in, "dimensions"));
  if (dims.size() != 2)
    throw std::invalid_argument("landscape: nk header needs n and k");
  NkLandscape l;
  l.n = parse_int(dims[0], "n");
  l.k = parse_int(dims[1], "k");
  if (l.n < 1 || l.k < 0 || l.k > l.n - 1)
    throw std::invalid_argument("landscape: nk dimensions out of range");
  const std::size_t rows = std::size_t{1} << (l.k + 1);
  l.neighbors.resize(static_cast<std::size_t>(l.n));
  l.table.resize(static_cast<std::size_t>(l.n));
  for (int i = 0; i < l.n; ++i) {
    l.neighbors[static_cast<std::size_t>(i)] =
        parse_int_list(next_line(in, "neighbor list"), static_cast<std::size_t>(l.k), "neighbor");
    for (int nb : l.neighbors[static_cast<std::size_t>(i)])
      if (nb < 0 || nb >= l.n || nb == i)
        throw std::invalid_argument("landscape: neighbor index out of range");
    l.table[static_cast<std::size_t>(i)] = parse_table(next_line(in, "table row"), rows);
  }
  return l;
}

std::string nkcs_to_text(const NkcsLandscape& l) {
  std::ostringstream out;
  out << "rbnedit-landscape 1 nkcs\n";
  out << l.n << ' ' << l.k << ' ' << l.c << ' ' << l.s << '\n';
  for (int i = 0; i < l.n; ++i) {
    append_int_list(out, l.neighbors[static_cast<std::size_t>(i)]);
    for (int p = 0; p < l.s; ++p)
      append_int_list(out, l.partner_neighbors[static_cast<std::size_t>(i)][static_cast<std::size_t>(p)]);
    append_table(out, l.table[static_cast<std::size_t>(i)]);
  }
  return out.str();
}

NkcsLandscape nkcs_from_text(const std::string& text) {
  std::istringstream in(text);
  if (next_line(in, "magic") != "rbnedit-landscape 1 nkcs")
    throw std::invalid_argument("landscape: bad magic line for nkcs");
  auto dims = split_ws(next_line(in, "dimensions"));
  if (dims.size() != 4)
    throw std::invalid_argument("landscape: nkcs header needs n k c s");
  NkcsLandscape l;
  l.n = parse_int(dims[0], "n");
  l.k = parse_int(dims[1], "k");
  l.c = parse_int(dims[2], "c");
  l.s = parse_int(dims[3], "s");
  if (l.n < 1 || l.k < 0 || l.k > l.n - 1 || l.c < 0 || l.c > l.n || l.s < 1)
    throw std::invalid_argument("landscape: nkcs dimensions out of range");
  const std::size_t rows = std::size_t{1} << (l.k + 1 + l.c * l.s);
  l.neighbors.resize(static_cast<std::size_t>(l.n));
  l.partner_neighbors.resize(static_cast<std::size_t>(l.n));
  l.table.resize(static_cast<std::size_t>(l.n));
  for (int i = 0; i < l.n; ++i) {
    l.neighbors[static_cast<std::size_t>(i)] =
        parse_int_list(next_line(in, "neighbor list"), static_cast<std::size_t>(l.k), "neighbor");
    for (int nb : l.neighbors[static_cast<std::size_t>(i)])
      if (nb < 0 || nb >= l.n || nb == i)
        throw std::invalid_argument("landscape: neighbor index out of range");
    auto& pn = l.partner_neighbors[static_cast<std::size_t>(i)];
    pn.resize(static_cast<std::size_t>(l.s));
    for (int p = 0; p < l.s; ++p) {
      pn[static_cast<std::size_t>(p)] =
          parse_int_list(next_line(in, "partner neighbor list"), static_cast<std::size_t>(l.c),
                         "partner neighbor");
      for (int nb : pn[static_cast<std::size_t>(p)])
        if (nb < 0 || nb >= l.n)
          throw std::invalid_argument("landscape: partner neighbor index out of range");
    }
    l.table[static_cast<std::size_t>(i)] = parse_table(next_line(in, "table row"), rows);
  }
  return l;
}

}  // namespace rbnedit
