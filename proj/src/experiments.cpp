#include "rbnedit/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "rbnedit/rng.hpp"

namespace rbnedit {
namespace {

std::string index_label(int landscape_index, bool alt) {
  std::string label = "landscape/" + std::to_string(landscape_index);
  if (alt) label += "/alt";
  return label;
}

// Landscapes depend only on (seed, shape, index, alt), so grid entries that
// vary B share them. Built serially before any worker starts; read-only
// afterwards.
class LandscapeCache {
 public:
  const NkLandscape& nk(std::uint64_t seed, int n, int k, int index, bool alt) {
    const auto key = std::make_tuple(seed, n, k, index, alt);
    auto it = nk_.find(key);
    if (it == nk_.end()) {
      RngStream rng =
          RngStream::from_seed(seed).derive(index_label(index, alt));
      it = nk_.emplace(key, generate_nk(n, k, rng)).first;
    }
    return it->second;
  }

  const NkcsLandscape& nkcs(std::uint64_t seed, int n, int k, int c, int s,
                            int index, bool alt) {
    const auto key = std::make_tuple(seed, n, k, c, s, index, alt);
    auto it = nkcs_.find(key);
    if (it == nkcs_.end()) {
      RngStream rng =
          RngStream::from_seed(seed).derive(index_label(index, alt));
      it = nkcs_.emplace(key, generate_nkcs(n, k, c, s, rng)).first;
    }
    return it->second;
  }

  void prebuild(const ExperimentSpec& spec) {
    for (int i = 0; i < spec.landscapes; ++i) {
      switch (spec.mode) {
        case Mode::Stationary:
          nk(spec.seed, spec.n, spec.k, i, false);
          break;
        case Mode::Nonstationary:
          nk(spec.seed, spec.n, spec.k, i, false);
          nk(spec.seed, spec.n, spec.k, i, true);
          break;
        case Mode::HeteroCoevo:
        case Mode::HomogDiff:
          nkcs(spec.seed, spec.n, spec.k, spec.c, spec.s, i, false);
          nkcs(spec.seed, spec.n, spec.k, spec.c, spec.s, i, true);
          break;
        case Mode::HomogSame:
          nkcs(spec.seed, spec.n, spec.k, spec.c, spec.s, i, false);
          break;
      }
    }
  }

 private:
  std::map<std::tuple<std::uint64_t, int, int, int, bool>, NkLandscape> nk_;
  std::map<std::tuple<std::uint64_t, int, int, int, int, int, bool>,
           NkcsLandscape>
      nkcs_;
};

InitParams make_init(const ExperimentSpec& spec) {
  InitParams ip;
  ip.r = spec.r;
  ip.n = spec.n;
  ip.b = spec.b;
  ip.b_prime = spec.b_prime;
  ip.editing = spec.editing;
  ip.coupled = mode_coupled(spec.mode);
  // Coupled cells take their environment from the partner; the external
  // clamp stays off unless explicitly requested.
  ip.n_input = (ip.coupled && !spec.clamp_coupled) ? 0 : spec.n_input;
  return ip;
}

RunResult run_one(const ExperimentSpec& spec, int landscape_index,
                  int run_index, LandscapeCache& cache) {
  const RngStream root = RngStream::from_seed(spec.seed);
  const RngStream base = root.derive("run/" + std::to_string(landscape_index) +
                                     "/" + std::to_string(run_index));
  switch (spec.mode) {
    case Mode::Stationary: {
      RbnkParams p;
      p.init = make_init(spec);
      p.nonstationary = false;
      p.generations = spec.generations;
      p.cycles = spec.cycles;
      p.log_every = spec.log_every;
      p.scramble_offspring = spec.scramble_control;
      const NkLandscape* ls[1] = {
          &cache.nk(spec.seed, spec.n, spec.k, landscape_index, false)};
      return evolve_rbnk(p, ls, RunStreams::derive(base));
    }
    case Mode::Nonstationary: {
      RbnkParams p;
      p.init = make_init(spec);
      p.nonstationary = true;
      p.generations = spec.generations;
      p.cycles = spec.cycles;
      p.log_every = spec.log_every;
      p.scramble_offspring = spec.scramble_control;
      const NkLandscape* ls[2] = {
          &cache.nk(spec.seed, spec.n, spec.k, landscape_index, false),
          &cache.nk(spec.seed, spec.n, spec.k, landscape_index, true)};
      return evolve_rbnk(p, ls, RunStreams::derive(base));
    }
    case Mode::HeteroCoevo: {
      HeteroParams p;
      p.init_a = make_init(spec);
      p.init_b = make_init(spec);
      p.generations = spec.generations;
      p.cycles = spec.cycles;
      p.log_every = spec.log_every;
      p.scramble_offspring = spec.scramble_control;
      return coevolve_hetero(
          p,
          cache.nkcs(spec.seed, spec.n, spec.k, spec.c, spec.s,
                     landscape_index, false),
          cache.nkcs(spec.seed, spec.n, spec.k, spec.c, spec.s,
                     landscape_index, true),
          RunStreams::derive(base), RunStreams::derive_partner(base));
    }
    case Mode::HomogDiff: {
      HomogParams p;
      p.init = make_init(spec);
      p.generations = spec.generations;
      p.cycles = spec.cycles;
      p.log_every = spec.log_every;
      p.scramble_offspring = spec.scramble_control;
      return coevolve_homog(
          p,
          cache.nkcs(spec.seed, spec.n, spec.k, spec.c, spec.s,
                     landscape_index, false),
          cache.nkcs(spec.seed, spec.n, spec.k, spec.c, spec.s,
                     landscape_index, true),
          RunStreams::derive(base));
    }
    case Mode::HomogSame: {
      HomogParams p;
      p.init = make_init(spec);
      p.generations = spec.generations;
      p.cycles = spec.cycles;
      p.log_every = spec.log_every;
      p.scramble_offspring = spec.scramble_control;
      const NkcsLandscape& l = cache.nkcs(spec.seed, spec.n, spec.k, spec.c,
                                          spec.s, landscape_index, false);
      return coevolve_homog(p, l, l, RunStreams::derive(base));
    }
  }
  throw std::logic_error("unhandled mode");
}

std::string cell_id(const ExperimentSpec& spec, int landscape_index,
                    int run_index) {
  std::ostringstream os;
  os << "mode=" << mode_name(spec.mode) << " B=" << spec.b << " K=" << spec.k;
  if (mode_coupled(spec.mode)) os << " C=" << spec.c;
  os << " landscape=" << landscape_index << " run=" << run_index;
  return os.str();
}

int effective_c(const ExperimentSpec& spec) {
  return mode_coupled(spec.mode) ? spec.c : 0;
}

int effective_s(const ExperimentSpec& spec) {
  return mode_coupled(spec.mode) ? spec.s : 0;
}

Aggregate aggregate_pairs(const std::vector<std::pair<double, double>>& xs) {
  Aggregate a;
  a.count = static_cast<int>(xs.size());
  if (xs.empty()) return a;
  a.min_fitness = a.max_fitness = xs.front().first;
  a.min_pct_grna = a.max_pct_grna = xs.front().second;
  double sf = 0.0, sp = 0.0;
  for (const auto& [f, p] : xs) {
    sf += f;
    sp += p;
    a.min_fitness = std::min(a.min_fitness, f);
    a.max_fitness = std::max(a.max_fitness, f);
    a.min_pct_grna = std::min(a.min_pct_grna, p);
    a.max_pct_grna = std::max(a.max_pct_grna, p);
  }
  a.mean_fitness = sf / static_cast<double>(xs.size());
  a.mean_pct_grna = sp / static_cast<double>(xs.size());
  return a;
}

}  // namespace

std::string_view mode_name(Mode m) {
  switch (m) {
    case Mode::Stationary: return "stationary";
    case Mode::Nonstationary: return "nonstationary";
    case Mode::HeteroCoevo: return "hetero_coevo";
    case Mode::HomogDiff: return "homog_diff";
    case Mode::HomogSame: return "homog_same";
  }
  throw std::logic_error("unhandled mode");
}

Mode mode_from_name(std::string_view name) {
  if (name == "stationary") return Mode::Stationary;
  if (name == "nonstationary") return Mode::Nonstationary;
  if (name == "hetero_coevo") return Mode::HeteroCoevo;
  if (name == "homog_diff") return Mode::HomogDiff;
  if (name == "homog_same") return Mode::HomogSame;
  throw std::invalid_argument("unknown mode: " + std::string(name));
}

bool mode_coupled(Mode m) {
  return m == Mode::HeteroCoevo || m == Mode::HomogDiff ||
         m == Mode::HomogSame;
}

void validate_spec(const ExperimentSpec& spec) {
  auto fail = [](const std::string& msg) {
    throw std::invalid_argument("spec: " + msg);
  };
  if (spec.r < 2) fail("R must be at least 2");
  if (spec.n < 1 || spec.n > spec.r) fail("N must be in [1, R]");
  if (spec.n_input < 0 || spec.n_input > spec.r)
    fail("n_input must be in [0, R]");
  if (spec.b < 1 || spec.b > 6) fail("B must be in [1, 6]");
  if (spec.b_prime < 1 || spec.b_prime > 6) fail("B' must be in [1, 6]");
  if (spec.k < 0 || spec.k > spec.n - 1) fail("K must be in [0, N-1]");
  if (mode_coupled(spec.mode)) {
    if (spec.c < 1 || spec.c > spec.n) fail("C must be in [1, N]");
    if (spec.s != 1) fail("S must be 1");
  }
  if (spec.generations < 0) fail("generations must be non-negative");
  if (spec.cycles < 1) fail("cycles must be at least 1");
  if (spec.runs_per_landscape < 1)
    fail("runs_per_landscape must be at least 1");
  if (spec.landscapes < 1) fail("landscapes must be at least 1");
  if (spec.log_every < 1) fail("log_every must be at least 1");
}

SweepOutput run_sweep(std::span<const ExperimentSpec> grid, int jobs) {
  SweepOutput out;
  out.specs.assign(grid.begin(), grid.end());
  for (const ExperimentSpec& spec : out.specs) validate_spec(spec);

  LandscapeCache cache;
  for (const ExperimentSpec& spec : out.specs) cache.prebuild(spec);

  struct Cell {
    std::size_t spec_index;
    int landscape, run;
  };
  std::vector<Cell> cells;
  for (std::size_t si = 0; si < out.specs.size(); ++si)
    for (int li = 0; li < out.specs[si].landscapes; ++li)
      for (int rj = 0; rj < out.specs[si].runs_per_landscape; ++rj)
        cells.push_back({si, li, rj});

  std::vector<RunResult> results(cells.size());
  std::atomic<std::size_t> next{0};
  std::mutex err_mu;
  std::size_t err_cell = std::numeric_limits<std::size_t>::max();
  std::exception_ptr err;

  auto worker = [&] {
    for (;;) {
      const std::size_t idx = next.fetch_add(1, std::memory_order_relaxed);
      if (idx >= cells.size()) return;
      const Cell& cell = cells[idx];
      try {
        results[idx] =
            run_one(out.specs[cell.spec_index], cell.landscape, cell.run,
                    cache);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(err_mu);
        if (idx < err_cell) {
          err_cell = idx;
          err = std::current_exception();
        }
      }
    }
  };

  const int workers =
      std::max(1, std::min<int>(jobs, static_cast<int>(cells.size())));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  if (err) {
    const Cell& cell = cells[err_cell];
    const std::string where =
        cell_id(out.specs[cell.spec_index], cell.landscape, cell.run);
    try {
      std::rethrow_exception(err);
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument(where + ": " + e.what());
    } catch (const std::logic_error& e) {
      throw std::logic_error(where + ": " + e.what());
    } catch (const std::exception& e) {
      throw std::runtime_error(where + ": " + e.what());
    }
  }

  out.cells.reserve(cells.size());
  for (std::size_t idx = 0; idx < cells.size(); ++idx)
    out.cells.push_back({cells[idx].spec_index, cells[idx].landscape,
                         cells[idx].run, std::move(results[idx])});
  return out;
}

RunResult run_cell(const ExperimentSpec& spec, int landscape_index,
                   int run_index) {
  validate_spec(spec);
  if (landscape_index < 0) throw std::invalid_argument("landscape index < 0");
  if (run_index < 0) throw std::invalid_argument("run index < 0");
  LandscapeCache cache;
  return run_one(spec, landscape_index, run_index, cache);
}

Aggregate aggregate_runs(std::span<const CellResult> cells) {
  std::vector<std::pair<double, double>> xs;
  xs.reserve(cells.size());
  for (const CellResult& cell : cells)
    xs.emplace_back(cell.result.final_fitness, cell.result.final_pct_grna);
  return aggregate_pairs(xs);
}

std::vector<SummaryRow> summary_rows(const SweepOutput& out) {
  std::vector<SummaryRow> rows;
  rows.reserve(out.cells.size());
  for (const CellResult& cell : out.cells) {
    const ExperimentSpec& spec = out.specs[cell.spec_index];
    SummaryRow row;
    row.mode = std::string(mode_name(spec.mode));
    row.b = spec.b;
    row.k = spec.k;
    row.c = effective_c(spec);
    row.s = effective_s(spec);
    row.landscape = cell.landscape;
    row.run = cell.run;
    row.seed = spec.seed;
    row.final_fitness = cell.result.final_fitness;
    row.final_pct_grna = cell.result.final_pct_grna;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<SeriesRow> series_rows(const SweepOutput& out) {
  std::vector<SeriesRow> rows;
  for (const CellResult& cell : out.cells) {
    const ExperimentSpec& spec = out.specs[cell.spec_index];
    for (const SeriesPoint& pt : cell.result.series) {
      SeriesRow row;
      row.mode = std::string(mode_name(spec.mode));
      row.b = spec.b;
      row.k = spec.k;
      row.c = effective_c(spec);
      row.landscape = cell.landscape;
      row.run = cell.run;
      row.generation = pt.generation;
      row.fitness = pt.fitness;
      row.pct_grna = pt.pct_grna;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::vector<AggregateRow> aggregate_rows(const SweepOutput& out) {
  std::vector<AggregateRow> rows;
  std::size_t begin = 0;
  for (std::size_t si = 0; si < out.specs.size(); ++si) {
    std::size_t end = begin;
    while (end < out.cells.size() && out.cells[end].spec_index == si) ++end;
    const Aggregate agg = aggregate_runs(
        std::span<const CellResult>(out.cells.data() + begin, end - begin));
    const ExperimentSpec& spec = out.specs[si];
    const std::string mode(mode_name(spec.mode));
    const int c = effective_c(spec);
    rows.push_back({mode, spec.b, spec.k, c, "mean", agg.mean_fitness,
                    agg.mean_pct_grna});
    rows.push_back(
        {mode, spec.b, spec.k, c, "min", agg.min_fitness, agg.min_pct_grna});
    rows.push_back(
        {mode, spec.b, spec.k, c, "max", agg.max_fitness, agg.max_pct_grna});
    begin = end;
  }
  return rows;
}

std::vector<ControlRow> control_comparison(std::span<const ExperimentSpec> grid,
                                           int jobs) {
  std::vector<ExperimentSpec> doubled;
  doubled.reserve(grid.size() * 2);
  for (const ExperimentSpec& spec : grid) {
    ExperimentSpec treatment = spec;
    treatment.scramble_control = false;
    ExperimentSpec control = spec;
    control.scramble_control = true;
    doubled.push_back(treatment);
    doubled.push_back(control);
  }

  const SweepOutput out = run_sweep(doubled, jobs);

  std::vector<std::vector<double>> finals(doubled.size());
  for (const CellResult& cell : out.cells)
    finals[cell.spec_index].push_back(cell.result.final_fitness);

  std::vector<ControlRow> rows;
  rows.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    ControlRow row;
    row.spec = grid[i];
    const std::vector<double>& treat = finals[2 * i];
    const std::vector<double>& ctrl = finals[2 * i + 1];
    row.mean_treatment = sample_mean(treat);
    row.mean_control = sample_mean(ctrl);
    row.welch = welch_t_test(treat, ctrl);
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

// Group summary rows by (B, K) for one mode/C slice, then walk the figure
// grid reporting gaps.
void collect_grid(std::string_view mode, int c,
                  std::span<const SummaryRow> summary, FigureDataset& d) {
  std::map<std::pair<int, int>, std::vector<std::pair<double, double>>> groups;
  for (const SummaryRow& row : summary) {
    if (row.mode != mode || row.c != c) continue;
    groups[{row.b, row.k}].emplace_back(row.final_fitness, row.final_pct_grna);
  }
  for (int b = kFigureBMin; b <= kFigureBMax; ++b) {
    for (int k = kFigureKMin; k <= kFigureKMax; ++k) {
      auto it = groups.find({b, k});
      if (it == groups.end()) {
        std::ostringstream os;
        os << mode;
        if (c > 0) os << " C=" << c;
        os << " B=" << b << " K=" << k;
        d.missing.push_back(os.str());
        continue;
      }
      d.cells.push_back({std::string(mode), b, k, c,
                         aggregate_pairs(it->second)});
    }
  }
}

bool mode_present(std::string_view mode, int c,
                  std::span<const SummaryRow> summary) {
  for (const SummaryRow& row : summary)
    if (row.mode == mode && row.c == c) return true;
  return false;
}

}  // namespace

FigureDataset figure_dataset(std::string_view figure_id,
                             std::span<const SummaryRow> summary,
                             std::span<const SeriesRow> series) {
  FigureDataset d;
  d.figure_id = std::string(figure_id);
  if (figure_id == "fig4") {
    collect_grid("stationary", 0, summary, d);
  } else if (figure_id == "fig5") {
    collect_grid("nonstationary", 0, summary, d);
  } else if (figure_id == "fig6") {
    collect_grid("hetero_coevo", 1, summary, d);
  } else if (figure_id == "fig7") {
    collect_grid("hetero_coevo", 5, summary, d);
  } else if (figure_id == "fig8") {
    for (const SeriesRow& row : series)
      if (row.mode == "hetero_coevo" && row.landscape == 0 && row.run == 0)
        d.series.push_back(row);
    if (d.series.empty())
      d.missing.push_back("hetero_coevo landscape=0 run=0: no series rows");
  } else if (figure_id == "fig9") {
    const bool has_diff = mode_present("homog_diff", 1, summary);
    const bool has_same = mode_present("homog_same", 1, summary);
    if (!has_diff && !has_same) {
      d.missing.push_back("homog_diff or homog_same at C=1: no rows");
    } else {
      if (has_diff) collect_grid("homog_diff", 1, summary, d);
      if (has_same) collect_grid("homog_same", 1, summary, d);
    }
  } else {
    throw std::invalid_argument("unknown figure id: " + std::string(figure_id));
  }
  return d;
}

std::string figure_dataset_to_csv(const FigureDataset& d) {
  if (d.figure_id == "fig8") {
    return series_to_csv(d.series);
  }
  std::string out =
      "mode,B,K,C,mean_fitness,min_fitness,max_fitness,"
      "mean_pct_grna,min_pct_grna,max_pct_grna\n";
  for (const FigureCellRow& cell : d.cells) {
    out += cell.mode;
    out += ',' + std::to_string(cell.b);
    out += ',' + std::to_string(cell.k);
    out += ',' + std::to_string(cell.c);
    out += ',' + format_fitness(cell.agg.mean_fitness);
    out += ',' + format_fitness(cell.agg.min_fitness);
    out += ',' + format_fitness(cell.agg.max_fitness);
    out += ',' + format_pct_grna(cell.agg.mean_pct_grna);
    out += ',' + format_pct_grna(cell.agg.min_pct_grna);
    out += ',' + format_pct_grna(cell.agg.max_pct_grna);
    out += '\n';
  }
  return out;
}

}  // namespace rbnedit
