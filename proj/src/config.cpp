#include "rbnedit/config.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string_view>

namespace rbnedit {
namespace {

std::string position_message(int line, int column, const std::string& msg) {
  if (line <= 0) return "config: " + msg;
  return "config line " + std::to_string(line) + ", column " +
         std::to_string(column) + ": " + msg;
}

constexpr const char* kKnownKeys[] = {
    "mode",       "R",          "N",
    "B",          "K",          "C",
    "S",          "generations", "cycles",
    "runs_per_landscape",        "landscapes",
    "log_every",  "seed",       "scramble_control",
    "preset",     "n_input",    "b_prime",
    "editing",    "clamp_coupled"};

bool known_key(const std::string& key) {
  for (const char* k : kKnownKeys)
    if (key == k) return true;
  return false;
}

struct Entry {
  std::string value;
  int line = 0;
  int key_column = 0;
  int value_column = 0;
};

using Entries = std::map<std::string, Entry>;

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

Entries tokenize(const std::string& text) {
  Entries entries;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    const std::string_view line(text.data() + pos,
                                (eol == std::string::npos ? text.size() : eol) -
                                    pos);
    ++line_no;

    std::size_t first = 0;
    while (first < line.size() &&
           std::isspace(static_cast<unsigned char>(line[first])))
      ++first;
    if (first < line.size() && line[first] != '#') {
      const std::size_t eq = line.find('=');
      if (eq == std::string::npos)
        throw ConfigError(line_no, static_cast<int>(first) + 1,
                          "expected key=value");
      const std::string key(trim(line.substr(0, eq)));
      if (key.empty())
        throw ConfigError(line_no, static_cast<int>(first) + 1, "empty key");
      if (!known_key(key))
        throw ConfigError(line_no, static_cast<int>(first) + 1,
                          "unknown key '" + key + "'");
      if (entries.count(key))
        throw ConfigError(line_no, static_cast<int>(first) + 1,
                          "duplicate key '" + key + "'");
      std::size_t vfirst = eq + 1;
      while (vfirst < line.size() &&
             std::isspace(static_cast<unsigned char>(line[vfirst])))
        ++vfirst;
      const std::string value(trim(line.substr(eq + 1)));
      if (value.empty())
        throw ConfigError(line_no, static_cast<int>(eq) + 2,
                          "empty value for '" + key + "'");
      entries[key] = Entry{value, line_no, static_cast<int>(first) + 1,
                           static_cast<int>(vfirst) + 1};
    }

    if (eol == std::string::npos) break;
    pos = eol + 1;
  }
  return entries;
}

[[noreturn]] void fail_value(const Entry& e, const std::string& msg) {
  throw ConfigError(e.line, e.value_column, msg);
}

long long parse_ll(const Entry& e, const std::string& piece) {
  errno = 0;
  char* end = nullptr;
  const long long v = std::strtoll(piece.c_str(), &end, 10);
  if (errno != 0 || end != piece.c_str() + piece.size() || piece.empty())
    fail_value(e, "expected integer, got '" + piece + "'");
  return v;
}

int parse_int(const Entry& e) {
  const long long v = parse_ll(e, e.value);
  if (v < INT32_MIN || v > INT32_MAX) fail_value(e, "integer out of range");
  return static_cast<int>(v);
}

std::uint64_t parse_u64(const Entry& e) {
  errno = 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(e.value.c_str(), &end, 10);
  if (errno != 0 || end != e.value.c_str() + e.value.size() ||
      e.value.empty() || e.value.front() == '-')
    fail_value(e, "expected unsigned integer, got '" + e.value + "'");
  return v;
}

bool parse_bool(const Entry& e) {
  if (e.value == "true" || e.value == "1") return true;
  if (e.value == "false" || e.value == "0") return false;
  fail_value(e, "expected true/false, got '" + e.value + "'");
}

// "2" or "0..3" or "1,3..4"; sorted and deduplicated.
std::vector<int> parse_int_list(const Entry& e) {
  std::vector<int> out;
  std::size_t pos = 0;
  const std::string& v = e.value;
  while (pos <= v.size()) {
    std::size_t comma = v.find(',', pos);
    if (comma == std::string::npos) comma = v.size();
    const std::string piece(trim(std::string_view(v).substr(pos, comma - pos)));
    if (piece.empty()) fail_value(e, "empty list element");
    const std::size_t dots = piece.find("..");
    if (dots == std::string::npos) {
      out.push_back(static_cast<int>(parse_ll(e, piece)));
    } else {
      const long long lo = parse_ll(e, piece.substr(0, dots));
      const long long hi = parse_ll(e, piece.substr(dots + 2));
      if (lo > hi) fail_value(e, "range '" + piece + "' is descending");
      for (long long x = lo; x <= hi; ++x) out.push_back(static_cast<int>(x));
    }
    if (comma == v.size()) break;
    pos = comma + 1;
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

struct Resolved {
  Mode mode = Mode::Stationary;
  int r = 100, n = 10;
  std::optional<int> n_input, b_prime;
  std::vector<int> b{2}, k{0}, c{1};
  int s = 1;
  int generations = 50000, cycles = 100;
  int runs = 10, landscapes = 10, log_every = 50;
  std::uint64_t seed = 1;
  bool scramble_control = false, editing = true, clamp_coupled = false;
};

void apply_preset(const Entry& e, Resolved& r) {
  if (e.value == "desk") {
    r.r = 50;
    r.n = 10;
    r.generations = 10000;
    r.cycles = 100;
    r.runs = 10;
    r.landscapes = 5;
    r.log_every = 50;
    r.mode = Mode::Stationary;
    r.b = {1, 2, 3, 4, 5};
    r.k = {0};
  } else if (e.value == "paper") {
    r.r = 100;
    r.n = 10;
    r.generations = 50000;
    r.cycles = 100;
    r.runs = 10;
    r.landscapes = 10;
    r.log_every = 50;
    r.mode = Mode::Stationary;
    r.b = {1, 2, 3, 4, 5};
    r.k = {0, 1, 2, 3, 4, 5};
  } else {
    fail_value(e, "unknown preset '" + e.value + "' (desk, paper)");
  }
}

// Validation failures point at the key the user wrote; constraints broken
// by defaults alone report without a position.
struct Where {
  const Entries& entries;
  void require(bool ok, const char* key, const std::string& msg) const {
    if (ok) return;
    auto it = entries.find(key);
    if (it == entries.end()) throw ConfigError(0, 0, msg);
    throw ConfigError(it->second.line, it->second.key_column, msg);
  }
};

}  // namespace

ConfigError::ConfigError(int line, int column, const std::string& msg)
    : std::invalid_argument(position_message(line, column, msg)),
      line_(line),
      column_(column) {}

std::vector<ExperimentSpec> parse_config(const std::string& text) {
  const Entries entries = tokenize(text);
  Resolved r;

  if (auto it = entries.find("preset"); it != entries.end())
    apply_preset(it->second, r);

  auto get = [&](const char* key) -> const Entry* {
    auto it = entries.find(key);
    return it == entries.end() ? nullptr : &it->second;
  };

  if (const Entry* e = get("mode")) {
    try {
      r.mode = mode_from_name(e->value);
    } catch (const std::invalid_argument& ex) {
      fail_value(*e, ex.what());
    }
  }
  if (const Entry* e = get("R")) r.r = parse_int(*e);
  if (const Entry* e = get("N")) r.n = parse_int(*e);
  if (const Entry* e = get("n_input")) r.n_input = parse_int(*e);
  if (const Entry* e = get("B")) r.b = parse_int_list(*e);
  if (const Entry* e = get("b_prime")) r.b_prime = parse_int(*e);
  if (const Entry* e = get("K")) r.k = parse_int_list(*e);
  if (const Entry* e = get("C")) r.c = parse_int_list(*e);
  if (const Entry* e = get("S")) r.s = parse_int(*e);
  if (const Entry* e = get("generations")) r.generations = parse_int(*e);
  if (const Entry* e = get("cycles")) r.cycles = parse_int(*e);
  if (const Entry* e = get("runs_per_landscape")) r.runs = parse_int(*e);
  if (const Entry* e = get("landscapes")) r.landscapes = parse_int(*e);
  if (const Entry* e = get("log_every")) r.log_every = parse_int(*e);
  if (const Entry* e = get("seed")) r.seed = parse_u64(*e);
  if (const Entry* e = get("scramble_control"))
    r.scramble_control = parse_bool(*e);
  if (const Entry* e = get("editing")) r.editing = parse_bool(*e);
  if (const Entry* e = get("clamp_coupled")) r.clamp_coupled = parse_bool(*e);

  const Where where{entries};
  where.require(r.r >= 2, "R", "R must be at least 2");
  where.require(r.n >= 1 && r.n <= r.r, "N", "N must be in [1, R]");
  const int n_input = r.n_input.value_or(r.n);
  where.require(n_input >= 0 && n_input <= r.r, "n_input",
                "n_input must be in [0, R]");
  where.require(!r.b.empty(), "B", "B list is empty");
  for (int b : r.b)
    where.require(b >= 1 && b <= 6, "B", "B must be in [1, 6]");
  if (r.b_prime)
    where.require(*r.b_prime >= 1 && *r.b_prime <= 6, "b_prime",
                  "b_prime must be in [1, 6]");
  where.require(!r.k.empty(), "K", "K list is empty");
  for (int k : r.k)
    where.require(k >= 0 && k <= r.n - 1, "K", "K must be in [0, N-1]");
  const bool coupled = mode_coupled(r.mode);
  if (coupled) {
    where.require(!r.c.empty(), "C", "C list is empty");
    for (int c : r.c)
      where.require(c >= 1 && c <= r.n, "C", "C must be in [1, N]");
    where.require(r.s == 1, "S", "S must be 1");
  }
  where.require(r.generations >= 0, "generations",
                "generations must be non-negative");
  where.require(r.cycles >= 1, "cycles", "cycles must be at least 1");
  where.require(r.runs >= 1, "runs_per_landscape",
                "runs_per_landscape must be at least 1");
  where.require(r.landscapes >= 1, "landscapes",
                "landscapes must be at least 1");
  where.require(r.log_every >= 1, "log_every", "log_every must be at least 1");

  // C and S only shape coupled runs; the grid collapses to one C otherwise.
  const std::vector<int> c_values = coupled ? r.c : std::vector<int>{1};

  std::vector<ExperimentSpec> grid;
  for (int b : r.b) {
    for (int k : r.k) {
      for (int c : c_values) {
        ExperimentSpec spec;
        spec.mode = r.mode;
        spec.r = r.r;
        spec.n = r.n;
        spec.n_input = n_input;
        spec.b = b;
        spec.b_prime = r.b_prime.value_or(b);
        spec.k = k;
        spec.c = c;
        spec.s = r.s;
        spec.generations = r.generations;
        spec.cycles = r.cycles;
        spec.runs_per_landscape = r.runs;
        spec.landscapes = r.landscapes;
        spec.log_every = r.log_every;
        spec.seed = r.seed;
        spec.scramble_control = r.scramble_control;
        spec.editing = r.editing;
        spec.clamp_coupled = r.clamp_coupled;
        grid.push_back(spec);
      }
    }
  }
  return grid;
}

std::vector<ExperimentSpec> load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace rbnedit
