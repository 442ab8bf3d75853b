#include <cstdint>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "rbnedit/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Boolean network evolution harness"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "results";
  std::uint64_t seed = 0;
  int jobs = 1;
  CLI::App* run = app.add_subcommand("run", "run the sweep from a config file");
  run->add_option("config", config_path, "key=value config file")->required();
  run->add_option("-o,--out", out_dir, "output directory (default results)");
  CLI::Option* seed_opt =
      run->add_option("--seed", seed, "override the root seed");
  run->add_option("-j,--jobs", jobs, "parallel cell workers (default 1)")
      ->check(CLI::PositiveNumber);

  std::string figure_id, results_dir, out_base;
  CLI::App* fig =
      app.add_subcommand("figure", "emit one figure dataset and chart");
  fig->add_option("figure", figure_id, "fig4, fig5, fig6, fig7, fig8 or fig9")
      ->required();
  fig->add_option("results", results_dir, "directory written by run")
      ->required();
  fig->add_option("-o,--out", out_base,
                  "output basename (default <results>/<figure>)");

  std::string file_a, file_b;
  std::string column = "final_fitness";
  CLI::App* tt =
      app.add_subcommand("ttest", "Welch t-test on a column of two CSV files");
  tt->add_option("a", file_a, "first CSV file")->required();
  tt->add_option("b", file_b, "second CSV file")->required();
  tt->add_option("-c,--column", column, "column name (default final_fitness)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (run->parsed()) {
    std::optional<std::uint64_t> seed_override;
    if (seed_opt->count() > 0) seed_override = seed;
    return rbnedit::cmd_run(config_path, out_dir, seed_override, jobs);
  }
  if (fig->parsed()) {
    if (out_base.empty()) out_base = results_dir + "/" + figure_id;
    return rbnedit::cmd_figure(figure_id, results_dir, out_base);
  }
  return rbnedit::cmd_ttest(file_a, file_b, column);
}
