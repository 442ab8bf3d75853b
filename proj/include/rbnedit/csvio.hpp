// The three CSV schemas the run command emits and the figure/ttest commands
// consume. LF line endings, '.' decimal separator, no quoting; fitness at 9
// decimals, %gRNA at 6.

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace rbnedit {

inline constexpr const char* kSummaryHeader =
    "mode,B,K,C,S,landscape,run,seed,final_fitness,final_pct_grna";
inline constexpr const char* kSeriesHeader =
    "mode,B,K,C,landscape,run,generation,fitness,pct_grna";
inline constexpr const char* kAggregateHeader =
    "mode,B,K,C,stat,fitness,pct_grna";

struct SummaryRow {
  std::string mode;
  int b = 0, k = 0, c = 0, s = 0;
  int landscape = 0, run = 0;
  std::uint64_t seed = 0;
  double final_fitness = 0.0;
  double final_pct_grna = 0.0;
};

struct SeriesRow {
  std::string mode;
  int b = 0, k = 0, c = 0;
  int landscape = 0, run = 0, generation = 0;
  double fitness = 0.0;
  double pct_grna = 0.0;
};

struct AggregateRow {
  std::string mode;
  int b = 0, k = 0, c = 0;
  std::string stat;  // mean, min, max
  double fitness = 0.0;
  double pct_grna = 0.0;
};

std::string format_fitness(double v);   // 9 decimals
std::string format_pct_grna(double v);  // 6 decimals

std::string summary_to_csv(std::span<const SummaryRow> rows);
std::string series_to_csv(std::span<const SeriesRow> rows);
std::string aggregate_to_csv(std::span<const AggregateRow> rows);

// Strict parsers: exact header line required, every row fully typed.
// Throw std::invalid_argument with a line reference on malformed input.
std::vector<SummaryRow> summary_from_csv(const std::string& text);
std::vector<SeriesRow> series_from_csv(const std::string& text);

// Extracts a named numeric column from any headered CSV.
std::vector<double> csv_column(const std::string& text, const std::string& column);

}  // namespace rbnedit
