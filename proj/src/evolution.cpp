#include "rbnedit/evolution.hpp"

#include <algorithm>
#include <stdexcept>

namespace rbnedit {

std::string_view mutation_kind_name(MutationKind k) {
  switch (k) {
    case MutationKind::FlipTranscriptionBit: return "flip_transcription_bit";
    case MutationKind::RewireBConnection: return "rewire_b_connection";
    case MutationKind::FlipStartState: return "flip_start_state";
    case MutationKind::ToggleEditable: return "toggle_editable";
    case MutationKind::AlterReconnectEntry: return "alter_reconnect_entry";
    case MutationKind::RewireBprimeConnection: return "rewire_b_prime_connection";
  }
  return "?";
}

namespace {

// Uniform over [0,r) excluding `current`; needs r >= 2.
int redraw_excluding(int r, int current, RngStream& rng) {
  int v = static_cast<int>(rng.next_index(static_cast<std::uint64_t>(r - 1)));
  return v >= current ? v + 1 : v;
}

std::vector<int> editable_ids(const NetworkGenome& g) {
  std::vector<int> out;
  for (int i = 0; i < g.r; ++i)
    if (g.nodes[static_cast<std::size_t>(i)].editable) out.push_back(i);
  return out;
}

void do_flip_transcription_bit(NetworkGenome& g, RngStream& rng) {
  const int v = static_cast<int>(rng.next_index(static_cast<std::uint64_t>(g.r)));
  NodeGene& node = g.nodes[static_cast<std::size_t>(v)];
  node.t_table.flip(static_cast<std::uint32_t>(rng.next_index(node.t_table.rows())));
}

void do_flip_start_state(NetworkGenome& g, RngStream& rng) {
  const int v = static_cast<int>(rng.next_index(static_cast<std::uint64_t>(g.r)));
  g.nodes[static_cast<std::size_t>(v)].start_state ^= 1;
}

// Shrinks/grows every reconnect list of node v by one entry to track an
// out-degree change. Rows visited in ascending order.
void shrink_reconnect_lists(NodeGene& node, RngStream& rng) {
  for (auto& e : node.reconnect) {
    const auto pos = rng.next_index(e.targets.size());
    e.targets.erase(e.targets.begin() + static_cast<std::ptrdiff_t>(pos));
  }
}

void grow_reconnect_lists(NodeGene& node, int r, RngStream& rng) {
  for (auto& e : node.reconnect)
    e.targets.push_back(static_cast<int>(rng.next_index(static_cast<std::uint64_t>(r))));
}

void do_rewire_b_connection(NetworkGenome& g, RngStream& rng) {
  // Eligible slots are all non-coupling slots; coupling bindings are fixed.
  const std::uint64_t eligible =
      static_cast<std::uint64_t>(g.r) * static_cast<std::uint64_t>(g.b) -
      g.coupling_targets.size();
  std::uint64_t pick = rng.next_index(eligible);
  // Map the eligible index onto a flat (node, slot) index by skipping the
  // coupling slots, each of which sits at flat index target*b.
  std::vector<int> ct(g.coupling_targets);
  std::sort(ct.begin(), ct.end());
  std::uint64_t flat = pick;
  for (int c : ct) {
    if (static_cast<std::uint64_t>(c) * static_cast<std::uint64_t>(g.b) <= flat) ++flat;
  }
  const int owner = static_cast<int>(flat / static_cast<std::uint64_t>(g.b));
  const int slot = static_cast<int>(flat % static_cast<std::uint64_t>(g.b));

  NodeGene& node = g.nodes[static_cast<std::size_t>(owner)];
  const int old_src = node.inputs[static_cast<std::size_t>(slot)];
  const int new_src = redraw_excluding(g.r, old_src, rng);
  node.inputs[static_cast<std::size_t>(slot)] = new_src;
  NodeGene& lost = g.nodes[static_cast<std::size_t>(old_src)];
  if (lost.editable) shrink_reconnect_lists(lost, rng);
  NodeGene& gained = g.nodes[static_cast<std::size_t>(new_src)];
  if (gained.editable) grow_reconnect_lists(gained, g.r, rng);
}

void do_toggle_editable(NetworkGenome& g, RngStream& rng) {
  const int v = static_cast<int>(rng.next_index(static_cast<std::uint64_t>(g.r)));
  NodeGene& node = g.nodes[static_cast<std::size_t>(v)];
  if (node.editable) {
    node.editable = false;
    node.grna_table = TruthTable();
    node.grna_inputs.clear();
    node.reconnect.clear();
    return;
  }
  node.editable = true;
  node.grna_table = TruthTable::random(std::uint32_t{1} << g.b_prime, rng);
  node.grna_inputs.resize(static_cast<std::size_t>(g.b_prime));
  for (auto& src : node.grna_inputs)
    src = static_cast<int>(rng.next_index(static_cast<std::uint64_t>(g.r)));
  const int deg = out_degree(g, v);
  node.reconnect.clear();
  for (std::uint32_t row = 0; row < node.grna_table.rows(); ++row) {
    if (!node.grna_table.get(row)) continue;
    ReconnectEntry e;
    e.row = row;
    e.targets.resize(static_cast<std::size_t>(deg));
    for (auto& t : e.targets)
      t = static_cast<int>(rng.next_index(static_cast<std::uint64_t>(g.r)));
    node.reconnect.push_back(std::move(e));
  }
}

void do_alter_reconnect_entry(NetworkGenome& g, const std::vector<int>& eligible,
                              RngStream& rng) {
  const int v = eligible[rng.next_index(eligible.size())];
  NodeGene& node = g.nodes[static_cast<std::size_t>(v)];
  auto& e = node.reconnect[rng.next_index(node.reconnect.size())];
  auto& t = e.targets[rng.next_index(e.targets.size())];
  t = static_cast<int>(rng.next_index(static_cast<std::uint64_t>(g.r)));
}

void do_rewire_b_prime(NetworkGenome& g, const std::vector<int>& eligible,
                       RngStream& rng) {
  const int v = eligible[rng.next_index(eligible.size())];
  NodeGene& node = g.nodes[static_cast<std::size_t>(v)];
  auto& src = node.grna_inputs[rng.next_index(node.grna_inputs.size())];
  src = redraw_excluding(g.r, src, rng);
}

}  // namespace

MutationKind mutate_in_place(NetworkGenome& g, const MutationPolicy& policy,
                             RngStream& rng) {
  if (g.r < 2) throw std::invalid_argument("mutate: need r >= 2");

  const std::vector<int> editable = editable_ids(g);
  std::vector<int> reconnectable;  // editable, >=1 entry, nonempty lists
  for (int v : editable) {
    const auto& rc = g.nodes[static_cast<std::size_t>(v)].reconnect;
    if (!rc.empty() && !rc.front().targets.empty()) reconnectable.push_back(v);
  }
  const bool has_free_slot =
      static_cast<std::uint64_t>(g.r) * static_cast<std::uint64_t>(g.b) >
      g.coupling_targets.size();

  std::vector<MutationKind> applicable;
  applicable.push_back(MutationKind::FlipTranscriptionBit);
  if (has_free_slot) applicable.push_back(MutationKind::RewireBConnection);
  applicable.push_back(MutationKind::FlipStartState);
  if (policy.editing) applicable.push_back(MutationKind::ToggleEditable);
  if (policy.editing && !reconnectable.empty())
    applicable.push_back(MutationKind::AlterReconnectEntry);
  if (policy.editing && !editable.empty())
    applicable.push_back(MutationKind::RewireBprimeConnection);

  const MutationKind kind = applicable[rng.next_index(applicable.size())];
  switch (kind) {
    case MutationKind::FlipTranscriptionBit: do_flip_transcription_bit(g, rng); break;
    case MutationKind::RewireBConnection: do_rewire_b_connection(g, rng); break;
    case MutationKind::FlipStartState: do_flip_start_state(g, rng); break;
    case MutationKind::ToggleEditable: do_toggle_editable(g, rng); break;
    case MutationKind::AlterReconnectEntry:
      do_alter_reconnect_entry(g, reconnectable, rng);
      break;
    case MutationKind::RewireBprimeConnection:
      do_rewire_b_prime(g, editable, rng);
      break;
  }
  return kind;
}

NetworkGenome mutate(const NetworkGenome& g, RngStream& rng) {
  NetworkGenome child = g;
  mutate_in_place(child, MutationPolicy{}, rng);
  return child;
}

SelectionOutcome select_offspring(double parent_fitness, int parent_editable,
                                  double child_fitness, int child_editable,
                                  RngStream& rng) {
  SelectionOutcome out;
  if (child_fitness > parent_fitness) {
    out.accepted = true;
    out.reason = SelectionOutcome::Reason::HigherFitness;
  } else if (child_fitness == parent_fitness) {
    if (child_editable < parent_editable) {
      out.accepted = true;
      out.reason = SelectionOutcome::Reason::TieFewerEditable;
    } else if (child_editable == parent_editable) {
      if (rng.next_index(2) == 1) {
        out.accepted = true;
        out.reason = SelectionOutcome::Reason::TieCoinFlip;
      }
    }
  }
  return out;
}

void scramble_reconnect_in_place(NetworkGenome& g, RngStream& rng) {
  for (auto& node : g.nodes) {
    if (!node.editable) continue;
    for (auto& e : node.reconnect)
      for (auto& t : e.targets)
        t = static_cast<int>(rng.next_index(static_cast<std::uint64_t>(g.r)));
  }
}

NetworkGenome scramble_reconnect(const NetworkGenome& g, RngStream& rng) {
  NetworkGenome out = g;
  scramble_reconnect_in_place(out, rng);
  return out;
}

RunStreams RunStreams::derive(const RngStream& run_base) {
  return RunStreams{run_base.derive("init"), run_base.derive("mutation"),
                    run_base.derive("editing"), run_base.derive("selection"),
                    run_base.derive("scramble")};
}

RunStreams RunStreams::derive_partner(const RngStream& run_base) {
  return RunStreams{run_base.derive("partner/init"),
                    run_base.derive("partner/mutation"),
                    run_base.derive("partner/editing"),
                    run_base.derive("partner/selection"),
                    run_base.derive("partner/scramble")};
}

namespace {

struct SeriesLogger {
  std::vector<SeriesPoint>& series;
  int log_every;
  int last_logged = -1;

  void log(int generation, double fitness, double pct) {
    series.push_back(SeriesPoint{generation, fitness, pct});
    last_logged = generation;
  }
  void maybe_log(int generation, double fitness, double pct) {
    if (generation % log_every == 0) log(generation, fitness, pct);
  }
  void finish(int generation, double fitness, double pct) {
    if (last_logged != generation) log(generation, fitness, pct);
  }
};

}  // namespace

RunResult evolve_rbnk(const RbnkParams& p,
                      std::span<const NkLandscape* const> landscapes,
                      const RunStreams& s) {
  if (p.generations < 0 || p.cycles < 1 || p.log_every < 1)
    throw std::invalid_argument("evolve_rbnk: bad counters");
  if (p.nonstationary && landscapes.size() < 2)
    throw std::invalid_argument("evolve_rbnk: nonstationary needs two landscapes");
  if (landscapes.empty())
    throw std::invalid_argument("evolve_rbnk: no landscape");

  RunStreams streams = s;
  MutationPolicy policy{p.init.editing};

  EpisodeSchedule schedule;
  schedule.input_a.assign(static_cast<std::size_t>(p.init.n_input), 0);
  if (p.nonstationary) {
    schedule.input_b.assign(static_cast<std::size_t>(p.init.n_input), 1);
    schedule.switch_cycle = p.cycles / 2;
  }

  NetworkGenome parent = init_genome(p.init, streams.init);
  NetworkRunner runner;
  runner.bind(parent);
  double parent_fitness =
      run_episode_mean(runner, landscapes, schedule, p.cycles, streams.editing);
  int parent_editable = parent.editable_count();

  RunResult res;
  SeriesLogger logger{res.series, p.log_every};
  logger.log(0, parent_fitness, parent.pct_grna());

  NetworkGenome child = parent;  // seeded once so later assigns reuse capacity
  for (int gen = 1; gen <= p.generations; ++gen) {
    child = parent;
    mutate_in_place(child, policy, streams.mutation);
    if (p.scramble_offspring) scramble_reconnect_in_place(child, streams.scramble);
    runner.bind(child);
    const double child_fitness =
        run_episode_mean(runner, landscapes, schedule, p.cycles, streams.editing);
    const int child_editable = child.editable_count();
    const auto sel = select_offspring(parent_fitness, parent_editable,
                                      child_fitness, child_editable,
                                      streams.selection);
    if (sel.accepted) {
      std::swap(parent, child);
      parent_fitness = child_fitness;
      parent_editable = child_editable;
    }
    logger.maybe_log(gen, parent_fitness, parent.pct_grna());
  }
  logger.finish(p.generations, parent_fitness, parent.pct_grna());
  res.final_fitness = parent_fitness;
  res.final_pct_grna = parent.pct_grna();
  return res;
}

namespace {

PairEpisodeSpec pair_spec(int cycles, bool pre_step, const NetworkGenome& first,
                          const NetworkGenome& second) {
  PairEpisodeSpec spec;
  spec.cycles = cycles;
  spec.pre_step_first = pre_step;
  spec.input_first.assign(static_cast<std::size_t>(first.n_input), 0);
  spec.input_second.assign(static_cast<std::size_t>(second.n_input), 0);
  return spec;
}

}  // namespace

RunResult coevolve_hetero(const HeteroParams& p, const NkcsLandscape& la,
                          const NkcsLandscape& lb, const RunStreams& sa,
                          const RunStreams& sb) {
  if (p.generations < 0 || p.cycles < 1 || p.log_every < 1)
    throw std::invalid_argument("coevolve_hetero: bad counters");
  if (la.s != 1 || lb.s != 1)
    throw std::invalid_argument("coevolve_hetero: landscapes must have S=1");

  RunStreams streams_a = sa;
  RunStreams streams_b = sb;
  InitParams ip_b = p.init_b;
  ip_b.editing = false;  // species B is a plain RBN

  NetworkGenome a = init_genome(p.init_a, streams_a.init);
  NetworkGenome b = init_genome(ip_b, streams_b.init);
  MutationPolicy policy_a{p.init_a.editing};
  MutationPolicy policy_b{false};

  NetworkRunner ra, rb, rc;  // rc evaluates candidates
  ra.bind(a);
  rb.bind(b);

  auto eval_first = [&](NetworkRunner& first, NetworkRunner& second,
                        const NkcsLandscape& lf, const NkcsLandscape& ls) {
    const auto spec =
        pair_spec(p.cycles, false, first.genome(), second.genome());
    return run_pair_episode(first, second, lf, ls, spec, streams_a.editing)
        .fitness_first;
  };

  RunResult res;
  SeriesLogger logger{res.series, p.log_every};
  double fitness_a = eval_first(ra, rb, la, lb);
  logger.log(0, fitness_a, a.pct_grna());

  NetworkGenome child = a;
  for (int gen = 1; gen <= p.generations; ++gen) {
    // (1) parent A scored against the current partner.
    fitness_a = eval_first(ra, rb, la, lb);
    // (2) mutant of A scored with the same partner, then selection.
    child = a;
    mutate_in_place(child, policy_a, streams_a.mutation);
    if (p.scramble_offspring) scramble_reconnect_in_place(child, streams_a.scramble);
    rc.bind(child);
    const double child_fitness = eval_first(rc, rb, la, lb);
    auto sel = select_offspring(fitness_a, a.editable_count(), child_fitness,
                                child.editable_count(), streams_a.selection);
    if (sel.accepted) {
      std::swap(a, child);
      ra.bind(a);
      fitness_a = child_fitness;
    }
    // (3) parent B scored against the surviving A.
    double fitness_b = eval_first(rb, ra, lb, la);
    // (4) mutant of B with the same partner, then selection.
    child = b;
    mutate_in_place(child, policy_b, streams_b.mutation);
    rc.bind(child);
    const double child_b_fitness = eval_first(rc, ra, lb, la);
    sel = select_offspring(fitness_b, 0, child_b_fitness, 0, streams_b.selection);
    if (sel.accepted) {
      std::swap(b, child);
      rb.bind(b);
    }
    logger.maybe_log(gen, fitness_a, a.pct_grna());
  }
  logger.finish(p.generations, fitness_a, a.pct_grna());
  res.final_fitness = fitness_a;
  res.final_pct_grna = a.pct_grna();
  return res;
}

RunResult coevolve_homog(const HomogParams& p, const NkcsLandscape& l1,
                         const NkcsLandscape& l2, const RunStreams& s) {
  if (p.generations < 0 || p.cycles < 1 || p.log_every < 1)
    throw std::invalid_argument("coevolve_homog: bad counters");
  if (l1.s != 1 || l2.s != 1)
    throw std::invalid_argument("coevolve_homog: landscapes must have S=1");

  RunStreams streams = s;
  MutationPolicy policy{p.init.editing};

  NetworkGenome parent = init_genome(p.init, streams.init);
  NetworkRunner cell1, cell2;

  auto evaluate = [&](const NetworkGenome& g) {
    cell1.bind(g);
    cell2.bind(g);
    const auto spec = pair_spec(p.cycles, true, g, g);
    const auto r = run_pair_episode(cell1, cell2, l1, l2, spec, streams.editing);
    return (r.fitness_first + r.fitness_second) / 2.0;
  };

  double parent_fitness = evaluate(parent);
  int parent_editable = parent.editable_count();

  RunResult res;
  SeriesLogger logger{res.series, p.log_every};
  logger.log(0, parent_fitness, parent.pct_grna());

  NetworkGenome child = parent;
  for (int gen = 1; gen <= p.generations; ++gen) {
    child = parent;
    mutate_in_place(child, policy, streams.mutation);
    if (p.scramble_offspring) scramble_reconnect_in_place(child, streams.scramble);
    const double child_fitness = evaluate(child);
    const int child_editable = child.editable_count();
    const auto sel = select_offspring(parent_fitness, parent_editable,
                                      child_fitness, child_editable,
                                      streams.selection);
    if (sel.accepted) {
      std::swap(parent, child);
      parent_fitness = child_fitness;
      parent_editable = child_editable;
    }
    logger.maybe_log(gen, parent_fitness, parent.pct_grna());
  }
  logger.finish(p.generations, parent_fitness, parent.pct_grna());
  res.final_fitness = parent_fitness;
  res.final_pct_grna = parent.pct_grna();
  return res;
}

}  // namespace rbnedit
