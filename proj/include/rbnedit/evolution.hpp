// Mutation operators, elitist selection with the anti-editing tie-break,
// the single-cell and two-cell hill-climber protocols, and the scrambled
// reconnection control.

#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "rbnedit/landscape.hpp"
#include "rbnedit/network.hpp"
#include "rbnedit/rng.hpp"

namespace rbnedit {

enum class MutationKind {
  FlipTranscriptionBit,
  RewireBConnection,
  FlipStartState,
  ToggleEditable,
  AlterReconnectEntry,
  RewireBprimeConnection,
};

std::string_view mutation_kind_name(MutationKind k);

struct MutationPolicy {
  // Editing disabled drops ToggleEditable and both editing-only operators,
  // leaving a plain-RBN mutation set.
  bool editing = true;
};

// Applies exactly one mutation, drawn uniformly over the kinds applicable
// to this genome (kinds needing an editable node drop out while none
// exists rather than wasting the generation). Keeps every genome
// invariant: reconnect lists are resized after out-degree changes, and
// toggling editable on synthesizes fresh gRNA machinery.
MutationKind mutate_in_place(NetworkGenome& g, const MutationPolicy& policy,
                             RngStream& rng);

NetworkGenome mutate(const NetworkGenome& g, RngStream& rng);

struct SelectionOutcome {
  enum class Reason { HigherFitness, TieFewerEditable, TieCoinFlip, Rejected };
  bool accepted = false;
  Reason reason = Reason::Rejected;
};

// Child replaces parent on strictly higher fitness; on an exact fitness tie
// the smaller editable count wins; on a full tie a coin flip decides.
SelectionOutcome select_offspring(double parent_fitness, int parent_editable,
                                  double child_fitness, int child_editable,
                                  RngStream& rng);

// Regenerates every reconnect target of every editable node uniformly at
// random, lengths preserved, everything else untouched.
void scramble_reconnect_in_place(NetworkGenome& g, RngStream& rng);
NetworkGenome scramble_reconnect(const NetworkGenome& g, RngStream& rng);

// One independent stream per randomness purpose; derived once per run so
// scheduling can never reorder draws.
struct RunStreams {
  RngStream init, mutation, editing, selection, scramble;

  static RunStreams derive(const RngStream& run_base);
  static RunStreams derive_partner(const RngStream& run_base);
};

struct SeriesPoint {
  int generation = 0;
  double fitness = 0.0;
  double pct_grna = 0.0;
};

struct RunResult {
  double final_fitness = 0.0;
  double final_pct_grna = 0.0;
  std::vector<SeriesPoint> series;
};

struct RbnkParams {
  InitParams init;
  bool nonstationary = false;  // cycle-50 input and landscape switch
  int generations = 50000;
  int cycles = 100;
  int log_every = 50;
  bool scramble_offspring = false;  // control cohort
};

// Single-cell hill-climber. Stationary mode scores every cycle against
// landscapes[0] under an all-zero input; nonstationary needs two
// landscapes and flips to all-ones input plus landscapes[1] at mid-episode.
RunResult evolve_rbnk(const RbnkParams& p,
                      std::span<const NkLandscape* const> landscapes,
                      const RunStreams& s);

struct HeteroParams {
  InitParams init_a;  // the editing-capable species
  InitParams init_b;  // plain RBN partner; editing forced off
  int generations = 50000;
  int cycles = 100;
  int log_every = 50;
  bool scramble_offspring = false;  // applied to species A's children
};

// Four steps per generation: score A against B, select over a mutant of A
// with the same partner, then the same pair of steps for B against the
// surviving A. Reported metrics are species A's.
RunResult coevolve_hetero(const HeteroParams& p, const NkcsLandscape& la,
                          const NkcsLandscape& lb, const RunStreams& sa,
                          const RunStreams& sb);

struct HomogParams {
  InitParams init;
  int generations = 50000;
  int cycles = 100;
  int log_every = 50;
  bool scramble_offspring = false;
};

// One genome instantiated as two coupled cells; the mother cell takes one
// unscored pre-step, then both alternate for the full episode. Genome
// fitness is the mean of the two per-cell means. l1 and l2 may be the same
// landscape (no task differentiation).
RunResult coevolve_homog(const HomogParams& p, const NkcsLandscape& l1,
                         const NkcsLandscape& l2, const RunStreams& s);

}  // namespace rbnedit
