#include "rbnedit/csvio.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace rbnedit {

namespace {

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  return buf;
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find(',', start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::vector<std::string> read_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

std::invalid_argument row_error(std::size_t line_no, const std::string& what) {
  return std::invalid_argument("csv line " + std::to_string(line_no) + ": " + what);
}

int to_int(const std::string& s, std::size_t line_no, const char* what) {
  try {
    std::size_t pos = 0;
    int v = std::stoi(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw row_error(line_no, std::string("bad integer for ") + what);
  }
}

std::uint64_t to_u64(const std::string& s, std::size_t line_no, const char* what) {
  try {
    std::size_t pos = 0;
    std::uint64_t v = std::stoull(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw row_error(line_no, std::string("bad unsigned for ") + what);
  }
}

double to_double(const std::string& s, std::size_t line_no, const char* what) {
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw row_error(line_no, std::string("bad number for ") + what);
  }
}

}  // namespace

std::string format_fitness(double v) { return fixed(v, 9); }
std::string format_pct_grna(double v) { return fixed(v, 6); }

std::string summary_to_csv(std::span<const SummaryRow> rows) {
  std::string out = kSummaryHeader;
  out += '\n';
  for (const auto& r : rows) {
    out += r.mode;
    out += ',' + std::to_string(r.b) + ',' + std::to_string(r.k) + ',' +
           std::to_string(r.c) + ',' + std::to_string(r.s) + ',' +
           std::to_string(r.landscape) + ',' + std::to_string(r.run) + ',' +
           std::to_string(r.seed) + ',' + format_fitness(r.final_fitness) +
           ',' + format_pct_grna(r.final_pct_grna);
    out += '\n';
  }
  return out;
}

std::string series_to_csv(std::span<const SeriesRow> rows) {
  std::string out = kSeriesHeader;
  out += '\n';
  for (const auto& r : rows) {
    out += r.mode;
    out += ',' + std::to_string(r.b) + ',' + std::to_string(r.k) + ',' +
           std::to_string(r.c) + ',' + std::to_string(r.landscape) + ',' +
           std::to_string(r.run) + ',' + std::to_string(r.generation) + ',' +
           format_fitness(r.fitness) + ',' + format_pct_grna(r.pct_grna);
    out += '\n';
  }
  return out;
}

std::string aggregate_to_csv(std::span<const AggregateRow> rows) {
  std::string out = kAggregateHeader;
  out += '\n';
  for (const auto& r : rows) {
    out += r.mode;
    out += ',' + std::to_string(r.b) + ',' + std::to_string(r.k) + ',' +
           std::to_string(r.c) + ',' + r.stat + ',' + format_fitness(r.fitness) +
           ',' + format_pct_grna(r.pct_grna);
    out += '\n';
  }
  return out;
}

std::vector<SummaryRow> summary_from_csv(const std::string& text) {
  auto lines = read_lines(text);
  if (lines.empty() || lines[0] != kSummaryHeader)
    throw std::invalid_argument("summary csv: missing or wrong header");
  std::vector<SummaryRow> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    auto f = split_line(lines[i]);
    if (f.size() != 10) throw row_error(i + 1, "expected 10 fields");
    SummaryRow r;
    r.mode = f[0];
    r.b = to_int(f[1], i + 1, "B");
    r.k = to_int(f[2], i + 1, "K");
    r.c = to_int(f[3], i + 1, "C");
    r.s = to_int(f[4], i + 1, "S");
    r.landscape = to_int(f[5], i + 1, "landscape");
    r.run = to_int(f[6], i + 1, "run");
    r.seed = to_u64(f[7], i + 1, "seed");
    r.final_fitness = to_double(f[8], i + 1, "final_fitness");
    r.final_pct_grna = to_double(f[9], i + 1, "final_pct_grna");
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<SeriesRow> series_from_csv(const std::string& text) {
  auto lines = read_lines(text);
  if (lines.empty() || lines[0] != kSeriesHeader)
    throw std::invalid_argument("series csv: missing or wrong header");
  std::vector<SeriesRow> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    auto f = split_line(lines[i]);
    if (f.size() != 9) throw row_error(i + 1, "expected 9 fields");
    SeriesRow r;
    r.mode = f[0];
    r.b = to_int(f[1], i + 1, "B");
    r.k = to_int(f[2], i + 1, "K");
    r.c = to_int(f[3], i + 1, "C");
    r.landscape = to_int(f[4], i + 1, "landscape");
    r.run = to_int(f[5], i + 1, "run");
    r.generation = to_int(f[6], i + 1, "generation");
    r.fitness = to_double(f[7], i + 1, "fitness");
    r.pct_grna = to_double(f[8], i + 1, "pct_grna");
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<double> csv_column(const std::string& text, const std::string& column) {
  auto lines = read_lines(text);
  if (lines.empty()) throw std::invalid_argument("csv: empty file");
  auto header = split_line(lines[0]);
  std::size_t col = header.size();
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == column) col = i;
  if (col == header.size())
    throw std::invalid_argument("csv: no column named '" + column + "'");
  std::vector<double> out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    auto f = split_line(lines[i]);
    if (f.size() != header.size()) throw row_error(i + 1, "field count mismatch");
    out.push_back(to_double(f[col], i + 1, column.c_str()));
  }
  return out;
}

}  // namespace rbnedit
