#include "rbnedit/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <tuple>

#include "rbnedit/config.hpp"
#include "rbnedit/csvio.hpp"
#include "rbnedit/experiments.hpp"
#include "rbnedit/stats.hpp"
#include "rbnedit/svg.hpp"

namespace rbnedit {
namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  const std::filesystem::path parent =
      std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::invalid_argument("cannot write file: " + path);
  out << text;
  out.flush();
  if (!out) throw std::invalid_argument("write failed: " + path);
}

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::logic_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}

}  // namespace

std::optional<std::uint64_t> seed_from_env() {
  const char* raw = std::getenv("RBNEDIT_SEED");
  if (raw == nullptr || *raw == '\0') return std::nullopt;
  char* end = nullptr;
  errno = 0;
  const unsigned long long v = std::strtoull(raw, &end, 10);
  if (errno != 0 || end == raw || *end != '\0' || raw[0] == '-')
    throw std::invalid_argument(
        std::string("RBNEDIT_SEED must be an unsigned integer, got '") + raw +
        "'");
  return v;
}

int cmd_run(const std::string& config_path, const std::string& out_dir,
            std::optional<std::uint64_t> seed_override, int jobs) {
  return guarded([&] {
    std::vector<ExperimentSpec> grid = load_config_file(config_path);
    if (!seed_override) seed_override = seed_from_env();
    if (seed_override)
      for (ExperimentSpec& spec : grid) spec.seed = *seed_override;

    const SweepOutput out = run_sweep(grid, jobs);

    std::vector<SummaryRow> summary = summary_rows(out);
    std::stable_sort(summary.begin(), summary.end(),
                     [](const SummaryRow& a, const SummaryRow& b) {
                       return std::tie(a.mode, a.b, a.k, a.c, a.landscape,
                                       a.run) < std::tie(b.mode, b.b, b.k,
                                                         b.c, b.landscape,
                                                         b.run);
                     });

    std::filesystem::create_directories(out_dir);
    write_file(out_dir + "/summary.csv", summary_to_csv(summary));
    write_file(out_dir + "/series.csv", series_to_csv(series_rows(out)));
    write_file(out_dir + "/aggregate.csv", aggregate_to_csv(aggregate_rows(out)));
    std::cout << out_dir << ": " << summary.size() << " runs across "
              << grid.size() << " configurations\n";
    return 0;
  });
}

int cmd_figure(const std::string& figure_id, const std::string& results_dir,
               const std::string& out_base) {
  return guarded([&] {
    const std::vector<SummaryRow> summary =
        summary_from_csv(read_file(results_dir + "/summary.csv"));
    std::vector<SeriesRow> series;
    if (figure_id == "fig8")
      series = series_from_csv(read_file(results_dir + "/series.csv"));

    const FigureDataset d = figure_dataset(figure_id, summary, series);
    if (!d.missing.empty()) {
      std::cerr << "error: incomplete data for " << figure_id << ", missing "
                << d.missing.size() << " cell(s):\n";
      for (const std::string& cell : d.missing)
        std::cerr << "  " << cell << '\n';
      return 4;
    }

    write_file(out_base + ".csv", figure_dataset_to_csv(d));
    write_file(out_base + ".svg", figure_to_svg(d));
    std::cout << out_base << ".csv\n" << out_base << ".svg\n";
    return 0;
  });
}

int cmd_ttest(const std::string& file_a, const std::string& file_b,
              const std::string& column) {
  return guarded([&] {
    const std::vector<double> a = csv_column(read_file(file_a), column);
    const std::vector<double> b = csv_column(read_file(file_b), column);
    const WelchResult w = welch_t_test(a, b);
    char buf[128];
    std::snprintf(buf, sizeof buf, "t=%.6f df=%.6f p=%.6f\n", w.t, w.df, w.p);
    std::cout << buf;
    return 0;
  });
}

}  // namespace rbnedit
