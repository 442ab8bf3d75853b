// RBN genomes with optional per-node editing machinery, plus a synchronous
// stepper with one-cycle rewiring, input clamping, and cross-network coupling.
//
// Conventions frozen here (they must never drift once outputs exist):
//   - Truth-table row index: input slot 0 is the most significant bit, the
//     last slot least significant. Same rule for gRNA rows.
//   - kCouplingSlot (-1) as an input source marks slot 0 of a coupling
//     target; its value comes from the partner's trait vector, it is never
//     counted in out-degree and never vacated or OR-folded by editing.
//   - Editing trigger at an update: node state 1 AND its gRNA state 1, both
//     as of the end of the previous cycle (post-clamp). The reconnect row is
//     built from the current gRNA input states; a triggered node whose row
//     has no reconnect entry (possible: the gRNA state lags one cycle behind
//     the row) performs no edit.
//   - Edit resolution: every base slot fed by an edited node reads constant
//     0 this cycle; each target in the node's reconnect list gains an extra
//     incoming 1 (the editor is expressed by the trigger), OR-folded into a
//     uniformly drawn non-coupling slot of the target. A target with no
//     non-coupling slot drops the extra and consumes no draw.
//   - gRNA states update synchronously from the raw (unedited) states of
//     their input nodes; at cycle 0 they are evaluated on the start states.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rbnedit/bittable.hpp"
#include "rbnedit/landscape.hpp"
#include "rbnedit/rng.hpp"

namespace rbnedit {

inline constexpr int kCouplingSlot = -1;

struct ReconnectEntry {
  std::uint32_t row = 0;            // gRNA-table row with output 1
  std::vector<int> targets;         // length == out_degree(owner)

  bool operator==(const ReconnectEntry&) const = default;
};

struct NodeGene {
  std::uint8_t start_state = 0;
  bool editable = false;
  TruthTable t_table;               // 2^B rows
  std::vector<int> inputs;          // B entries, node id or kCouplingSlot
  TruthTable grna_table;            // 2^B' rows when editable, else empty
  std::vector<int> grna_inputs;     // B' entries when editable, else empty
  std::vector<ReconnectEntry> reconnect;  // sorted by row, one per 1-row

  bool operator==(const NodeGene&) const = default;
};

struct NetworkGenome {
  int r = 0;
  int b = 0;
  int b_prime = 0;
  int n_input = 0;                  // clamped leading nodes (0 disables)
  std::vector<NodeGene> nodes;
  std::vector<int> trait_ids;       // N distinct ids
  std::vector<int> coupling_targets;  // N distinct ids, empty in single-cell mode

  int n_traits() const { return static_cast<int>(trait_ids.size()); }
  bool coupled() const { return !coupling_targets.empty(); }
  int editable_count() const;
  double pct_grna() const;

  bool operator==(const NetworkGenome&) const = default;
};

struct InitParams {
  int r = 100;
  int n = 10;
  int n_input = 10;
  int b = 2;
  int b_prime = 2;
  bool editing = true;   // draw editable flags and gRNA machinery
  bool coupled = false;  // draw coupling targets and bind their slot 0
};

// Draw order (frozen): trait ids, coupling targets, then per node in id
// order: start state, editable flag, t_table, inputs, gRNA table, gRNA
// inputs; finally reconnect targets per editable node in id order, per
// 1-row in row order. Coupling slots consume no input draw.
NetworkGenome init_genome(const InitParams& p, RngStream& rng);

// Intra-network slots fed by v; coupling slots never count.
int out_degree(const NetworkGenome& g, int v);

// Throws std::logic_error on any structural violation.
void check_invariants(const NetworkGenome& g);

struct NetworkState {
  std::vector<std::uint8_t> node_states;
  std::vector<std::uint8_t> grna_states;  // meaningful at editable nodes
};

// Start states, with gRNA states evaluated on them.
NetworkState initial_state(const NetworkGenome& g);

// Effective-wiring record for one update, for tests and trace dumps.
struct StepTrace {
  std::vector<int> edited;                   // triggered nodes that had a row entry
  std::vector<std::pair<int, int>> vacated;  // (node, slot) reading constant 0
  std::vector<std::pair<int, int>> folded;   // (node, slot) OR-ed with an extra 1
  std::vector<int> dropped_extras;           // targets with no foldable slot
};

// One synchronous update in place. input spans n_input bits (empty when
// clamping is off); external_traits spans the genome's trait count when the
// genome is coupled, empty otherwise. rng feeds only extra-input folding.
void step(const NetworkGenome& g, NetworkState& st,
          std::span<const std::uint8_t> input,
          std::span<const std::uint8_t> external_traits, RngStream& rng,
          StepTrace* trace = nullptr);

// Per-cycle evaluation schedule: input vector plus which landscape scores
// the cycle. Cycle c uses entry (c < switch_cycle ? 0 : 1).
struct EpisodeSchedule {
  std::vector<std::uint8_t> input_a;   // cycles before switch_cycle
  std::vector<std::uint8_t> input_b;   // cycles from switch_cycle on
  int switch_cycle = -1;               // -1: input_a and landscape 0 throughout
};

struct EpisodeResult {
  double mean_fitness = 0.0;
  std::vector<std::vector<std::uint8_t>> trait_trace;  // one row per cycle
};

// Runs `cycles` updates from the genome start states, scoring trait states
// after every cycle against the scheduled landscape; mean over cycles.
EpisodeResult run_episode(const NetworkGenome& g,
                          std::span<const NkLandscape* const> landscapes,
                          const EpisodeSchedule& schedule, int cycles,
                          RngStream& rng, bool want_trace = false);

// Reusable single-network workspace so the evolve loop never reallocates.
class NetworkRunner {
 public:
  // Validates sizes and reconnect/out-degree equality; std::logic_error on
  // violation. Keeps a pointer: the genome must outlive the runner binding.
  void bind(const NetworkGenome& g);

  void reset();  // start states + gRNA evaluation
  void load(const NetworkState& st);
  void save(NetworkState& st) const;
  void step_once(std::span<const std::uint8_t> input,
                 std::span<const std::uint8_t> external_traits, RngStream& rng,
                 StepTrace* trace = nullptr);

  const NetworkGenome& genome() const { return *g_; }
  std::span<const std::uint8_t> states() const { return cur_; }
  // Trait states gathered in trait_ids order, valid until the next step.
  std::span<const std::uint8_t> trait_states();

 private:
  const NetworkGenome* g_ = nullptr;
  std::vector<int> flat_inputs_;       // r*b, kCouplingSlot or source id
  std::vector<std::uint64_t> t_word_;  // whole table per node when 2^b <= 64
  std::vector<const TruthTable*> t_ptr_;  // fallback for wider tables
  std::vector<int> out_slots_;         // reverse index, grouped by source
  std::vector<int> out_begin_;         // r+1 offsets into out_slots_
  std::vector<int> ct_index_;          // node id -> trait slot j, or -1
  std::vector<int> editable_ids_;
  std::vector<std::uint8_t> editable_bits_;
  std::vector<int> flat_grna_inputs_;  // editable-major, b_prime per node
  std::vector<std::uint64_t> g_word_;
  std::vector<const TruthTable*> g_ptr_;
  std::vector<std::uint8_t> cur_, nxt_, grna_cur_, grna_nxt_;
  std::vector<std::uint8_t> missing_;   // per slot, cleared lazily
  std::vector<std::uint8_t> extra_or_;  // per slot, cleared lazily
  std::vector<int> touched_missing_, touched_extra_;
  std::vector<std::uint8_t> trait_buf_;
};

// Episode mean for a pre-bound runner; the allocation-free form the evolve
// loops use. Landscape selection and inputs as in run_episode.
double run_episode_mean(NetworkRunner& runner,
                        std::span<const NkLandscape* const> landscapes,
                        const EpisodeSchedule& schedule, int cycles,
                        RngStream& rng);

// Paired episode over two networks with alternating updates. `first` steps
// first each cycle and is scored right after its own update against the
// partner trait states its coupling inputs just read; then `second`
// likewise. The pre_step_first flag runs one unscored update of `first`
// before the loop (the reproducing mother cell). A genome without coupling
// targets simply ignores the partner's states, which severs the dynamical
// coupling while keeping the protocol; the landscape keying still sees the
// partner's traits.
struct PairEpisodeSpec {
  int cycles = 100;
  bool pre_step_first = false;
  // Clamp vectors, sized to each genome's n_input (empty: no clamping).
  std::vector<std::uint8_t> input_first;
  std::vector<std::uint8_t> input_second;
};

struct PairEpisodeResult {
  double fitness_first = 0.0;
  double fitness_second = 0.0;
};

PairEpisodeResult run_pair_episode(NetworkRunner& first, NetworkRunner& second,
                                   const NkcsLandscape& l_first,
                                   const NkcsLandscape& l_second,
                                   const PairEpisodeSpec& spec, RngStream& rng);

// Versioned text round trip, one node per line.
std::string genome_to_text(const NetworkGenome& g);
NetworkGenome genome_from_text(const std::string& text);

}  // namespace rbnedit
