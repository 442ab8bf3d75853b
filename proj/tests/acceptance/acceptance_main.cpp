// End-to-end acceptance checks. Each criterion prints exactly one
// PASS/FAIL line; the exit code is nonzero when any checked criterion
// fails. `--only 5,9` restricts the set. Budget notes: the desk-scale
// sweep (criteria 4, 6, 7, 9) runs the shipped binary three times and
// dominates the runtime.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>
#include <sys/wait.h>
#include <unistd.h>

#include "rbnedit/csvio.hpp"
#include "rbnedit/evolution.hpp"
#include "rbnedit/experiments.hpp"
#include "rbnedit/landscape.hpp"
#include "rbnedit/network.hpp"
#include "rbnedit/rng.hpp"
#include "rbnedit/stats.hpp"
#include "../oracle_nk.hpp"
#include "../reference_rbn.hpp"

using namespace rbnedit;
namespace fs = std::filesystem;

namespace {

// Pinned thresholds. kAlpha gates every directional claim; kDriftFactor is
// the required median %gRNA shrink on a flat landscape; kOracleTol is the
// relative tolerance against the externally computed t-test triple.
constexpr double kAlpha = 0.05;
constexpr double kDriftFactor = 0.1;
constexpr double kOracleTol = 0.01;

// Fixed 10-vs-20 dataset with its externally computed Welch statistics.
const std::vector<double> kWelchA = {19.8, 20.4, 19.6, 17.8, 18.5,
                                     18.9, 18.3, 18.9, 19.5, 22.0};
const std::vector<double> kWelchB = {28.2, 26.6, 20.1, 23.3, 25.2, 22.1, 17.7,
                                     27.6, 20.6, 13.7, 23.2, 17.5, 20.6, 18.0,
                                     23.9, 21.6, 24.3, 20.4, 24.0, 13.2};
constexpr double kOracleT = -2.2192409158;
constexpr double kOracleDf = 24.4962231242;
constexpr double kOracleP = 0.0359722710;

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    pass = false;
    detail = detail.empty() ? why : detail + "; " + why;
  }
};

double elapsed_s(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof buf, format, args);
  va_end(args);
  return buf;
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

TruthTable table_from_bits(std::initializer_list<int> bits) {
  TruthTable t(static_cast<std::uint32_t>(bits.size()));
  std::uint32_t row = 0;
  for (int bit : bits) t.set(row++, bit);
  return t;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Shared desk-scale artefacts, built once on first demand. Criteria 4, 6
// and 9 read the preset sweep; 4 and 7 add a matched-seed nonstationary
// sweep; 4 adds a two-cell sweep.
struct Shared {
  fs::path root;

  bool desk_ran = false;
  bool desk_reruns_identical = false;
  bool desk_jobs_identical = false;
  std::vector<SummaryRow> desk_summary;
  std::vector<SeriesRow> desk_series;

  bool nonstat_ran = false;
  std::vector<SummaryRow> nonstat_summary;
  std::vector<SeriesRow> nonstat_series;

  bool homog_ran = false;
  std::vector<SeriesRow> homog_series;

  void run_binary(const std::string& args) {
    const std::string cmd = std::string(RBNEDIT_BINARY_PATH) + " " + args +
                            " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    if (!WIFEXITED(status) || WEXITSTATUS(status) != 0)
      throw std::runtime_error("command failed: " + cmd);
  }

  void ensure_desk() {
    if (desk_ran) return;
    fs::create_directories(root);
    const fs::path cfg = root / "desk.cfg";
    std::ofstream(cfg) << "preset = desk\n";

    run_binary("run " + cfg.string() + " -o " + (root / "desk_a").string() +
               " -j 1");
    run_binary("run " + cfg.string() + " -o " + (root / "desk_b").string() +
               " -j 8");
    run_binary("run " + cfg.string() + " -o " + (root / "desk_c").string() +
               " -j 8");

    desk_reruns_identical = true;
    desk_jobs_identical = true;
    for (const char* file : {"summary.csv", "series.csv", "aggregate.csv"}) {
      const std::string a = slurp(root / "desk_a" / file);
      const std::string b = slurp(root / "desk_b" / file);
      const std::string c = slurp(root / "desk_c" / file);
      if (b != c) desk_reruns_identical = false;
      if (a != b) desk_jobs_identical = false;
    }
    desk_summary = summary_from_csv(slurp(root / "desk_a" / "summary.csv"));
    desk_series = series_from_csv(slurp(root / "desk_a" / "series.csv"));
    desk_ran = true;
  }

  static ExperimentSpec desk_spec() {
    ExperimentSpec s;
    s.r = 50;
    s.n = 10;
    s.n_input = 10;
    s.k = 0;
    s.generations = 10000;
    s.cycles = 100;
    s.runs_per_landscape = 10;
    s.landscapes = 5;
    s.log_every = 50;
    s.seed = 1;
    return s;
  }

  void ensure_nonstat() {
    if (nonstat_ran) return;
    ExperimentSpec s = desk_spec();
    s.mode = Mode::Nonstationary;
    s.b = 1;
    s.b_prime = 1;
    const ExperimentSpec grid[] = {s};
    const SweepOutput out = run_sweep(grid, 1);
    nonstat_summary = summary_rows(out);
    nonstat_series = series_rows(out);
    nonstat_ran = true;
  }

  void ensure_homog() {
    if (homog_ran) return;
    ExperimentSpec s = desk_spec();
    s.mode = Mode::HomogDiff;
    s.b = 2;
    s.b_prime = 2;
    s.c = 1;
    s.s = 1;
    const ExperimentSpec grid[] = {s};
    const SweepOutput out = run_sweep(grid, 1);
    homog_series = series_rows(out);
    homog_ran = true;
  }

  std::vector<double> summary_column(const std::vector<SummaryRow>& rows,
                                     int b, bool pct) const {
    std::vector<double> v;
    for (const SummaryRow& r : rows)
      if (r.b == b) v.push_back(pct ? r.final_pct_grna : r.final_fitness);
    return v;
  }
};

// ---------------------------------------------------------------------
// 1. Hand-built five-node scenario: node 3 fires an edit on its all-zero
// gRNA row, detaching from nodes 0 and 2 and feeding nodes 1 and 4 for one
// cycle, with ordinary wiring restored on the next.
Outcome c1_micro() {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();

  NetworkGenome g;
  g.r = 5;
  g.b = 2;
  g.b_prime = 2;
  g.n_input = 0;
  g.trait_ids = {4};
  g.nodes.resize(5);
  const TruthTable zero = table_from_bits({0, 0, 0, 0});
  const TruthTable nor = table_from_bits({1, 0, 0, 0});
  const TruthTable xr = table_from_bits({0, 1, 1, 0});
  g.nodes[0].t_table = zero;
  g.nodes[0].inputs = {3, 1};
  g.nodes[1].t_table = xr;
  g.nodes[1].inputs = {0, 0};
  g.nodes[2].t_table = nor;
  g.nodes[2].inputs = {3, 0};
  g.nodes[3].t_table = nor;
  g.nodes[3].inputs = {2, 0};
  g.nodes[4].t_table = xr;
  g.nodes[4].inputs = {0, 0};
  g.nodes[3].editable = true;
  g.nodes[3].grna_table = table_from_bits({1, 0, 0, 0});
  g.nodes[3].grna_inputs = {0, 0};
  g.nodes[3].reconnect = {ReconnectEntry{0, {1, 4}}};
  check_invariants(g);

  if (out_degree(g, 3) != 2) out.fail("editor out-degree");

  NetworkState st = initial_state(g);
  RngStream rng = RngStream::from_seed(99);
  StepTrace trace;
  using V = std::vector<std::uint8_t>;

  step(g, st, {}, {}, rng, &trace);
  if (st.node_states != V{0, 0, 1, 1, 0}) out.fail("cycle 1 states");
  if (!trace.edited.empty()) out.fail("cycle 1 edited");

  step(g, st, {}, {}, rng, &trace);
  if (st.node_states != V{0, 1, 1, 0, 1}) out.fail("cycle 2 states");
  if (trace.edited != std::vector<int>{3}) out.fail("cycle 2 edit source");
  std::set<std::pair<int, int>> vac(trace.vacated.begin(),
                                    trace.vacated.end());
  if (vac != std::set<std::pair<int, int>>{{0, 0}, {2, 0}})
    out.fail("cycle 2 vacated slots");
  std::set<int> folded;
  for (const auto& [node, slot] : trace.folded) folded.insert(node);
  if (folded != std::set<int>{1, 4}) out.fail("cycle 2 reconnect targets");
  if (!trace.dropped_extras.empty()) out.fail("cycle 2 dropped extras");

  step(g, st, {}, {}, rng, &trace);
  if (st.node_states != V{0, 0, 1, 0, 0}) out.fail("cycle 3 states");
  if (!trace.edited.empty() || !trace.vacated.empty() ||
      !trace.folded.empty())
    out.fail("edit not reset after one cycle");

  const double dt = elapsed_s(t0);
  if (dt >= 1.0) out.fail("over 1 s");
  if (out.pass)
    out.detail = fmt("edit hits nodes 1 and 4 for one cycle, then resets "
                     "(%.3f s)",
                     dt);
  return out;
}

// 2. Landscape evaluation equals an independent brute-force recomputation
// on every input vector, exactly.
Outcome c2_oracle() {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  RngStream rng = RngStream::from_seed(2024);
  long comparisons = 0;

  for (int n = 1; n <= 4; ++n) {
    for (int k = 0; k <= std::min(2, n - 1); ++k) {
      const NkLandscape nk = generate_nk(n, k, rng);
      for (std::uint32_t v = 0; v < (1u << n); ++v) {
        std::vector<std::uint8_t> traits(static_cast<std::size_t>(n));
        std::vector<int> itraits(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
          traits[static_cast<std::size_t>(i)] = (v >> i) & 1u;
          itraits[static_cast<std::size_t>(i)] = (v >> i) & 1;
        }
        ++comparisons;
        if (evaluate_nk(nk, traits) != oracle::nk_fitness(nk, itraits)) {
          out.fail(fmt("nk n=%d k=%d v=%u", n, k, v));
          break;
        }
      }

      const NkcsLandscape cs = generate_nkcs(n, k, 1, 1, rng);
      for (std::uint32_t own = 0; own < (1u << n); ++own) {
        for (std::uint32_t pv = 0; pv < (1u << n); ++pv) {
          std::vector<std::uint8_t> o(static_cast<std::size_t>(n)),
              p(static_cast<std::size_t>(n));
          std::vector<int> io(static_cast<std::size_t>(n)),
              ip(static_cast<std::size_t>(n));
          for (int i = 0; i < n; ++i) {
            o[static_cast<std::size_t>(i)] = (own >> i) & 1u;
            p[static_cast<std::size_t>(i)] = (pv >> i) & 1u;
            io[static_cast<std::size_t>(i)] = (own >> i) & 1;
            ip[static_cast<std::size_t>(i)] = (pv >> i) & 1;
          }
          ++comparisons;
          if (evaluate_nkcs1(cs, o, p) != oracle::nkcs_fitness(cs, io, {ip})) {
            out.fail(fmt("nkcs n=%d k=%d own=%u partner=%u", n, k, own, pv));
            break;
          }
        }
      }
    }
  }
  const double dt = elapsed_s(t0);
  if (dt >= 10.0) out.fail("over 10 s");
  if (out.pass)
    out.detail = fmt("%ld exact comparisons (%.3f s)", comparisons, dt);
  return out;
}

// 3. With editing absent the stepper is a classic synchronous RBN: bitwise
// agreement with the naive reference over 100 random genomes.
Outcome c3_regression() {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  RngStream rng = RngStream::from_seed(777);

  for (int trial = 0; trial < 100 && out.pass; ++trial) {
    InitParams p;
    p.r = 2 + static_cast<int>(rng.next_index(31));
    p.n = 1 + static_cast<int>(
                  rng.next_index(static_cast<std::size_t>(std::min(p.r, 8))));
    p.n_input = static_cast<int>(
        rng.next_index(static_cast<std::size_t>(std::min(p.r, 4) + 1)));
    p.b = 1 + static_cast<int>(rng.next_index(3));
    p.editing = false;
    const NetworkGenome g = init_genome(p, rng);

    std::vector<std::uint8_t> input(static_cast<std::size_t>(p.n_input));
    std::vector<int> iinput(static_cast<std::size_t>(p.n_input));
    for (std::size_t i = 0; i < input.size(); ++i) {
      input[i] = static_cast<std::uint8_t>(rng.next_index(2));
      iinput[i] = input[i];
    }

    NetworkState st = initial_state(g);
    std::vector<int> ref = reference::start_states(g);
    RngStream editing = RngStream::from_seed(0);
    for (int cycle = 0; cycle < 100; ++cycle) {
      step(g, st, input, {}, editing);
      reference::step_plain(g, ref, iinput);
      if (!std::equal(ref.begin(), ref.end(), st.node_states.begin())) {
        out.fail(fmt("trial %d cycle %d", trial, cycle));
        break;
      }
    }
  }
  const double dt = elapsed_s(t0);
  if (dt >= 10.0) out.fail("over 10 s");
  if (out.pass)
    out.detail = fmt("100 genomes, 100 cycles each, bitwise equal (%.3f s)",
                     dt);
  return out;
}

// 4. Elitism: within every fixed-landscape run the logged lineage fitness
// never decreases.
Outcome c4_elitism(Shared& shared) {
  Outcome out;
  shared.ensure_desk();
  shared.ensure_nonstat();
  shared.ensure_homog();

  using Key = std::tuple<std::string, int, int, int, int, int>;
  std::map<Key, std::vector<std::pair<int, double>>> lineages;
  for (const auto* rows :
       {&shared.desk_series, &shared.nonstat_series, &shared.homog_series}) {
    for (const SeriesRow& r : *rows)
      lineages[{r.mode, r.b, r.k, r.c, r.landscape, r.run}].emplace_back(
          r.generation, r.fitness);
  }

  int violations = 0;
  for (auto& [key, points] : lineages) {
    std::sort(points.begin(), points.end());
    for (std::size_t i = 1; i < points.size(); ++i)
      if (points[i].second < points[i - 1].second) ++violations;
  }
  if (violations > 0) out.fail(fmt("%d decreases", violations));
  if (lineages.size() != 350)
    out.fail(fmt("expected 350 lineages, saw %zu", lineages.size()));
  if (out.pass)
    out.detail = fmt("%zu lineages across three modes, 0 decreases",
                     lineages.size());
  return out;
}

// 5. On a landscape whose every entry is equal, selection can only shed
// editable flags: %gRNA is non-increasing in each run and the median
// collapses.
Outcome c5_flat() {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();

  RngStream lrng = RngStream::from_seed(4242);
  NkLandscape flat = generate_nk(10, 0, lrng);
  for (auto& row : flat.table)
    for (double& v : row) v = 0.5;

  std::vector<double> initial, finals;
  int violations = 0;
  for (int run = 0; run < 50; ++run) {
    RbnkParams p;
    p.init.r = 20;
    p.init.n = 10;
    p.init.n_input = 10;
    p.init.b = 2;
    p.generations = 20000;
    p.cycles = 100;
    p.log_every = 1;
    const NkLandscape* ls[1] = {&flat};
    const RunStreams streams =
        RunStreams::derive(RngStream::from_seed(9000 + run));
    const RunResult res = evolve_rbnk(p, ls, streams);

    for (std::size_t i = 1; i < res.series.size(); ++i)
      if (res.series[i].pct_grna > res.series[i - 1].pct_grna) ++violations;
    initial.push_back(res.series.front().pct_grna);
    finals.push_back(res.final_pct_grna);
  }

  const double med0 = median_of(initial);
  const double med1 = median_of(finals);
  if (violations > 0) out.fail(fmt("%d increases", violations));
  if (med1 > kDriftFactor * med0)
    out.fail(fmt("median %.4f -> %.4f, needs factor %.2f", med0, med1,
                 kDriftFactor));
  const double dt = elapsed_s(t0);
  if (dt >= 120.0) out.fail("over 2 min");
  if (out.pass)
    out.detail = fmt("median %%gRNA %.3f -> %.3f over 50 runs, "
                     "monotone in all (%.1f s)",
                     med0, med1, dt);
  return out;
}

// 6. Desk-scale connectivity sweep: low-B runs beat high-B runs on final
// fitness, while editing is retained more at high B.
Outcome c6_connectivity(Shared& shared) {
  Outcome out;
  shared.ensure_desk();
  const std::vector<double> f1 = shared.summary_column(shared.desk_summary,
                                                       1, false);
  const std::vector<double> f5 = shared.summary_column(shared.desk_summary,
                                                       5, false);
  const std::vector<double> p5 = shared.summary_column(shared.desk_summary,
                                                       5, true);
  const std::vector<double> p2 = shared.summary_column(shared.desk_summary,
                                                       2, true);
  const WelchResult w = welch_t_test(f1, f5);
  const double m1 = mean_of(f1), m5 = mean_of(f5);
  const double q5 = mean_of(p5), q2 = mean_of(p2);

  if (!(m1 > m5)) out.fail(fmt("fitness B1 %.4f <= B5 %.4f", m1, m5));
  if (!(w.p < kAlpha)) out.fail(fmt("fitness p=%.4f", w.p));
  if (!(q5 > q2)) out.fail(fmt("%%gRNA B5 %.4f <= B2 %.4f", q5, q2));
  if (out.pass)
    out.detail = fmt("fitness B1 %.4f > B5 %.4f (p=%.2g), "
                     "%%gRNA B5 %.3f > B2 %.3f",
                     m1, m5, w.p, q5, q2);
  return out;
}

// 7. Mid-episode input/landscape switching retains more editing at B=1
// than the stationary task on matched seeds and landscapes.
Outcome c7_switching(Shared& shared) {
  Outcome out;
  shared.ensure_desk();
  shared.ensure_nonstat();
  const std::vector<double> stat = shared.summary_column(shared.desk_summary,
                                                         1, true);
  const std::vector<double> ns = shared.summary_column(shared.nonstat_summary,
                                                       1, true);
  const WelchResult w = welch_t_test(ns, stat);
  const double mn = mean_of(ns), ms = mean_of(stat);
  if (!(mn > ms)) out.fail(fmt("%%gRNA switching %.4f <= stationary %.4f",
                               mn, ms));
  if (!(w.p < kAlpha)) out.fail(fmt("p=%.4f", w.p));
  if (out.pass)
    out.detail = fmt("%%gRNA switching %.3f > stationary %.3f (p=%.2g)", mn,
                     ms, w.p);
  return out;
}

// 8. Scrambling the evolved reconnection tables each generation drops
// fitness at B=5.
//
// Known to fail at this scale. The gap has the right sign and widens with
// generations (about +0.003 at 10k, +0.009 at 50k on matched cohorts) but
// is roughly 0.3 sigma per run here, so Welch stays far above 0.05. The
// threshold is kept as-is instead of being tuned until it passes.
Outcome c8_control() {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  ExperimentSpec s = Shared::desk_spec();
  s.b = 5;
  s.b_prime = 5;
  const ExperimentSpec grid[] = {s};
  const std::vector<ControlRow> rows = control_comparison(grid, 1);
  const ControlRow& row = rows.front();
  if (!(row.mean_treatment > row.mean_control))
    out.fail(fmt("treatment %.4f <= control %.4f", row.mean_treatment,
                 row.mean_control));
  if (!(row.welch.p < kAlpha)) out.fail(fmt("p=%.4f", row.welch.p));
  if (out.pass)
    out.detail = fmt("evolved %.4f > scrambled %.4f (p=%.2g, %.0f s)",
                     row.mean_treatment, row.mean_control, row.welch.p,
                     elapsed_s(t0));
  return out;
}

// 9. Bytewise determinism of the shipped binary across reruns and worker
// counts.
Outcome c9_determinism(Shared& shared) {
  Outcome out;
  shared.ensure_desk();
  if (!shared.desk_reruns_identical) out.fail("reruns differ");
  if (!shared.desk_jobs_identical) out.fail("jobs=1 vs jobs=8 differ");
  if (out.pass)
    out.detail = "three invocations (jobs 1, 8, 8) byte-identical across "
                 "all CSVs";
  return out;
}

// 10. The Welch implementation matches the externally computed triple.
Outcome c10_welch() {
  Outcome out;
  const WelchResult w = welch_t_test(kWelchA, kWelchB);
  auto close = [](double got, double want) {
    return std::fabs(got - want) <= kOracleTol * std::fabs(want);
  };
  if (!close(w.t, kOracleT)) out.fail(fmt("t=%.6f want %.6f", w.t, kOracleT));
  if (!close(w.df, kOracleDf))
    out.fail(fmt("df=%.6f want %.6f", w.df, kOracleDf));
  if (!close(w.p, kOracleP)) out.fail(fmt("p=%.6f want %.6f", w.p, kOracleP));
  if (out.pass)
    out.detail = fmt("t=%.4f df=%.4f p=%.4f within 1%%", w.t, w.df, w.p);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  ::unsetenv("RBNEDIT_SEED");

  std::set<int> only;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--only" && i + 1 < argc) {
      std::stringstream ss(argv[++i]);
      std::string piece;
      while (std::getline(ss, piece, ',')) only.insert(std::stoi(piece));
    } else {
      std::fprintf(stderr, "usage: %s [--only N[,M...]]\n", argv[0]);
      return 2;
    }
  }

  Shared shared;
  shared.root = fs::temp_directory_path() /
                ("rbnedit_acceptance_" + std::to_string(::getpid()));

  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "hand-built editing scenario", [&] { return c1_micro(); }},
      {2, "landscape oracle equivalence", [&] { return c2_oracle(); }},
      {3, "plain-network stepper regression", [&] { return c3_regression(); }},
      {4, "elitist lineages never lose fitness",
       [&] { return c4_elitism(shared); }},
      {5, "flat-landscape editing decay", [&] { return c5_flat(); }},
      {6, "connectivity sweep directional trends",
       [&] { return c6_connectivity(shared); }},
      {7, "switching task retains more editing",
       [&] { return c7_switching(shared); }},
      {8, "scrambled reconnection control", [&] { return c8_control(); }},
      {9, "bytewise determinism", [&] { return c9_determinism(shared); }},
      {10, "t-test external oracle", [&] { return c10_welch(); }},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    if (!only.empty() && !only.count(c.id)) continue;
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail = std::string("exception: ") + e.what();
    }
    if (!out.pass) ++failures;
    std::printf("criterion %2d %s  %s%s%s\n", c.id,
                out.pass ? "PASS" : "FAIL", c.name,
                out.detail.empty() ? "" : ": ", out.detail.c_str());
    std::fflush(stdout);
  }

  std::error_code ec;
  fs::remove_all(shared.root, ec);
  return failures == 0 ? 0 : 1;
}
