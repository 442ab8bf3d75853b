// Flat key=value experiment configuration. Unknown and duplicate keys are
// hard errors with a line/column position; missing keys fall back to the
// defaults (R=100, N=10, generations=50000, cycles=100, N'=N, B'=B) or to
// a named preset. B, K and C accept comma lists and a..b ranges and expand
// into a grid of specs, B ascending, then K, then C.

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "rbnedit/experiments.hpp"

namespace rbnedit {

class ConfigError : public std::invalid_argument {
 public:
  ConfigError(int line, int column, const std::string& msg);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_, column_;
};

std::vector<ExperimentSpec> parse_config(const std::string& text);

// Reads and parses; missing or unreadable file throws std::invalid_argument.
std::vector<ExperimentSpec> load_config_file(const std::string& path);

}  // namespace rbnedit
