// Subcommand implementations behind the rbnedit binary. Exit codes are
// stable API: 0 ok, 2 config or input error, 3 internal invariant failure,
// 4 incomplete data for a figure.

#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace rbnedit {

// Parses RBNEDIT_SEED when set; malformed values throw
// std::invalid_argument.
std::optional<std::uint64_t> seed_from_env();

// Runs the configured sweep and writes summary.csv, series.csv and
// aggregate.csv into out_dir. Seed precedence: explicit override, then
// RBNEDIT_SEED, then the config file.
int cmd_run(const std::string& config_path, const std::string& out_dir,
            std::optional<std::uint64_t> seed_override, int jobs);

// Writes <out_base>.csv and <out_base>.svg for one figure from a results
// directory produced by cmd_run.
int cmd_figure(const std::string& figure_id, const std::string& results_dir,
               const std::string& out_base);

// Welch t-test between one numeric column of two CSV files.
int cmd_ttest(const std::string& file_a, const std::string& file_b,
              const std::string& column);

}  // namespace rbnedit
