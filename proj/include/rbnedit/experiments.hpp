// Experiment families: seeded sweeps over parameter grids, cross-run
// aggregation, the scrambled-reconnection control comparison, and the
// per-figure dataset extraction.
//
// Stream wiring (frozen): from the root seed, landscape i comes from
// "landscape/i" (second landscape of a pair from "landscape/i/alt"), and
// run j on landscape i from "run/i/j", split into per-purpose streams (see
// RunStreams). Cell identity alone fixes every draw, so scheduling and job
// counts cannot change results.

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rbnedit/csvio.hpp"
#include "rbnedit/evolution.hpp"
#include "rbnedit/landscape.hpp"
#include "rbnedit/stats.hpp"

namespace rbnedit {

enum class Mode { Stationary, Nonstationary, HeteroCoevo, HomogDiff, HomogSame };

std::string_view mode_name(Mode m);
Mode mode_from_name(std::string_view name);  // throws std::invalid_argument
bool mode_coupled(Mode m);

struct ExperimentSpec {
  Mode mode = Mode::Stationary;
  int r = 100;
  int n = 10;
  int n_input = 10;
  int b = 2;
  int b_prime = 2;
  int k = 0;
  int c = 1;
  int s = 1;
  int generations = 50000;
  int cycles = 100;
  int runs_per_landscape = 10;
  int landscapes = 10;
  int log_every = 50;
  std::uint64_t seed = 1;
  bool scramble_control = false;  // run the scrambled-offspring cohort
  bool editing = true;
  bool clamp_coupled = false;
};

// Throws std::invalid_argument naming the first bad field.
void validate_spec(const ExperimentSpec& spec);

struct CellResult {
  std::size_t spec_index = 0;
  int landscape = 0;
  int run = 0;
  RunResult result;
};

struct SweepOutput {
  std::vector<ExperimentSpec> specs;
  std::vector<CellResult> cells;  // ordered by (spec_index, landscape, run)
};

// Executes every (spec, landscape, run) cell, jobs at a time. Results are
// keyed by cell index and do not depend on the job count. Landscapes are
// materialized up front and shared read-only.
SweepOutput run_sweep(std::span<const ExperimentSpec> grid, int jobs);

// One cell in isolation; bit-identical to its slot in a full sweep.
RunResult run_cell(const ExperimentSpec& spec, int landscape_index, int run_index);

struct Aggregate {
  int count = 0;
  double mean_fitness = 0.0, min_fitness = 0.0, max_fitness = 0.0;
  double mean_pct_grna = 0.0, min_pct_grna = 0.0, max_pct_grna = 0.0;
};

Aggregate aggregate_runs(std::span<const CellResult> cells);

std::vector<SummaryRow> summary_rows(const SweepOutput& out);
std::vector<SeriesRow> series_rows(const SweepOutput& out);
std::vector<AggregateRow> aggregate_rows(const SweepOutput& out);

struct ControlRow {
  ExperimentSpec spec;
  double mean_treatment = 0.0;
  double mean_control = 0.0;
  WelchResult welch;
};

// Matched treatment and scrambled-control cohorts per grid entry: same
// seed, hence identical landscapes and run streams; only the per-offspring
// scramble differs.
std::vector<ControlRow> control_comparison(std::span<const ExperimentSpec> grid,
                                           int jobs);

// The (B, K) grid every aggregate figure covers.
inline constexpr int kFigureBMin = 1, kFigureBMax = 5;
inline constexpr int kFigureKMin = 0, kFigureKMax = 5;

struct FigureCellRow {
  std::string mode;
  int b = 0, k = 0, c = 0;
  Aggregate agg;
};

struct FigureDataset {
  std::string figure_id;
  std::vector<FigureCellRow> cells;   // fig4-fig7, fig9
  std::vector<SeriesRow> series;      // fig8
  std::vector<std::string> missing;   // unmet grid cells; empty means complete
};

// fig4: stationary; fig5: nonstationary; fig6: hetero_coevo C=1;
// fig7: hetero_coevo C=5; fig8: hetero_coevo series of landscape 0, run 0;
// fig9: homog_diff and/or homog_same at C=1. Missing cells are reported,
// never interpolated.
FigureDataset figure_dataset(std::string_view figure_id,
                             std::span<const SummaryRow> summary,
                             std::span<const SeriesRow> series);

std::string figure_dataset_to_csv(const FigureDataset& d);

}  // namespace rbnedit
