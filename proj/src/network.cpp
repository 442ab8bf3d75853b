#include "rbnedit/network.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace rbnedit {

namespace {

std::vector<int> draw_distinct_ids(int r, int n, RngStream& rng) {
  std::vector<int> pool(static_cast<std::size_t>(r));
  for (int i = 0; i < r; ++i) pool[static_cast<std::size_t>(i)] = i;
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int d = 0; d < n; ++d) {
    std::uint64_t idx = rng.next_index(pool.size());
    out.push_back(pool[idx]);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(idx));
  }
  return out;
}

std::vector<ReconnectEntry> draw_reconnect(const NetworkGenome& g, int v,
                                           RngStream& rng) {
  std::vector<ReconnectEntry> out;
  const NodeGene& node = g.nodes[static_cast<std::size_t>(v)];
  const int deg = out_degree(g, v);
  for (std::uint32_t row = 0; row < node.grna_table.rows(); ++row) {
    if (!node.grna_table.get(row)) continue;
    ReconnectEntry e;
    e.row = row;
    e.targets.resize(static_cast<std::size_t>(deg));
    for (auto& t : e.targets)
      t = static_cast<int>(rng.next_index(static_cast<std::uint64_t>(g.r)));
    out.push_back(std::move(e));
  }
  return out;
}

std::logic_error bad(const std::string& what) {
  return std::logic_error("genome invariant: " + what);
}

}  // namespace

int NetworkGenome::editable_count() const {
  int n = 0;
  for (const auto& node : nodes) n += node.editable ? 1 : 0;
  return n;
}

double NetworkGenome::pct_grna() const {
  return r == 0 ? 0.0 : static_cast<double>(editable_count()) / static_cast<double>(r);
}

NetworkGenome init_genome(const InitParams& p, RngStream& rng) {
  if (p.r < 1 || p.n < 1 || p.n > p.r)
    throw std::invalid_argument("init_genome: need 1 <= n <= r");
  if (p.b < 1 || p.b_prime < 1)
    throw std::invalid_argument("init_genome: need b, b_prime >= 1");
  if (p.n_input < 0 || p.n_input > p.r)
    throw std::invalid_argument("init_genome: need 0 <= n_input <= r");

  NetworkGenome g;
  g.r = p.r;
  g.b = p.b;
  g.b_prime = p.b_prime;
  g.n_input = p.n_input;
  g.trait_ids = draw_distinct_ids(p.r, p.n, rng);
  if (p.coupled) g.coupling_targets = draw_distinct_ids(p.r, p.n, rng);

  std::vector<std::uint8_t> is_ct(static_cast<std::size_t>(p.r), 0);
  for (int v : g.coupling_targets) is_ct[static_cast<std::size_t>(v)] = 1;

  const auto t_rows = std::uint32_t{1} << p.b;
  const auto g_rows = std::uint32_t{1} << p.b_prime;
  g.nodes.resize(static_cast<std::size_t>(p.r));
  for (int i = 0; i < p.r; ++i) {
    NodeGene& node = g.nodes[static_cast<std::size_t>(i)];
    node.start_state = static_cast<std::uint8_t>(rng.next_index(2));
    node.editable = p.editing && rng.next_index(2) == 1;
    node.t_table = TruthTable::random(t_rows, rng);
    node.inputs.resize(static_cast<std::size_t>(p.b));
    for (int s = 0; s < p.b; ++s) {
      if (s == 0 && is_ct[static_cast<std::size_t>(i)])
        node.inputs[0] = kCouplingSlot;
      else
        node.inputs[static_cast<std::size_t>(s)] =
            static_cast<int>(rng.next_index(static_cast<std::uint64_t>(p.r)));
    }
    if (node.editable) {
      node.grna_table = TruthTable::random(g_rows, rng);
      node.grna_inputs.resize(static_cast<std::size_t>(p.b_prime));
      for (auto& s : node.grna_inputs)
        s = static_cast<int>(rng.next_index(static_cast<std::uint64_t>(p.r)));
    }
  }
  // Out-degrees are final once all inputs exist; reconnect lists last.
  for (int i = 0; i < p.r; ++i) {
    NodeGene& node = g.nodes[static_cast<std::size_t>(i)];
    if (node.editable) node.reconnect = draw_reconnect(g, i, rng);
  }
  return g;
}

int out_degree(const NetworkGenome& g, int v) {
  int deg = 0;
  for (const auto& node : g.nodes)
    for (int src : node.inputs)
      if (src == v) ++deg;
  return deg;
}

void check_invariants(const NetworkGenome& g) {
  if (g.r < 1 || static_cast<int>(g.nodes.size()) != g.r)
    throw bad("node count");
  if (g.b < 1 || g.b_prime < 1) throw bad("in-degree parameters");
  if (g.n_input < 0 || g.n_input > g.r) throw bad("n_input range");
  auto check_ids = [&](const std::vector<int>& ids, const char* what) {
    std::vector<std::uint8_t> seen(static_cast<std::size_t>(g.r), 0);
    for (int v : ids) {
      if (v < 0 || v >= g.r) throw bad(std::string(what) + " id range");
      if (seen[static_cast<std::size_t>(v)]) throw bad(std::string(what) + " duplicate");
      seen[static_cast<std::size_t>(v)] = 1;
    }
  };
  if (g.trait_ids.empty()) throw bad("empty trait set");
  check_ids(g.trait_ids, "trait");
  if (!g.coupling_targets.empty()) {
    if (g.coupling_targets.size() != g.trait_ids.size())
      throw bad("coupling target count");
    check_ids(g.coupling_targets, "coupling target");
  }
  std::vector<std::uint8_t> is_ct(static_cast<std::size_t>(g.r), 0);
  for (int v : g.coupling_targets) is_ct[static_cast<std::size_t>(v)] = 1;

  std::vector<int> deg(static_cast<std::size_t>(g.r), 0);
  for (int i = 0; i < g.r; ++i) {
    const NodeGene& node = g.nodes[static_cast<std::size_t>(i)];
    if (node.start_state > 1) throw bad("start state not a bit");
    if (static_cast<int>(node.inputs.size()) != g.b) throw bad("input slot count");
    if (node.t_table.rows() != std::uint32_t{1} << g.b) throw bad("t_table size");
    for (int s = 0; s < g.b; ++s) {
      int src = node.inputs[static_cast<std::size_t>(s)];
      if (src == kCouplingSlot) {
        if (s != 0 || !is_ct[static_cast<std::size_t>(i)])
          throw bad("coupling sentinel outside a coupling slot");
      } else if (src < 0 || src >= g.r) {
        throw bad("input source range");
      }
    }
    if (is_ct[static_cast<std::size_t>(i)] && node.inputs[0] != kCouplingSlot)
      throw bad("coupling target slot 0 not bound");
    for (int src : node.inputs)
      if (src >= 0) ++deg[static_cast<std::size_t>(src)];
  }
  for (int i = 0; i < g.r; ++i) {
    const NodeGene& node = g.nodes[static_cast<std::size_t>(i)];
    if (!node.editable) {
      if (node.grna_table.rows() != 0 || !node.grna_inputs.empty() ||
          !node.reconnect.empty())
        throw bad("editing machinery on a non-editable node");
      continue;
    }
    if (node.grna_table.rows() != std::uint32_t{1} << g.b_prime)
      throw bad("grna_table size");
    if (static_cast<int>(node.grna_inputs.size()) != g.b_prime)
      throw bad("grna input count");
    for (int src : node.grna_inputs)
      if (src < 0 || src >= g.r) throw bad("grna input range");
    std::size_t want = 0;
    for (std::uint32_t row = 0; row < node.grna_table.rows(); ++row)
      want += node.grna_table.get(row) ? 1 : 0;
    if (node.reconnect.size() != want) throw bad("reconnect entry count");
    std::uint32_t prev_row = 0;
    bool first = true;
    for (const auto& e : node.reconnect) {
      if (!first && e.row <= prev_row) throw bad("reconnect rows unsorted");
      first = false;
      prev_row = e.row;
      if (e.row >= node.grna_table.rows() || !node.grna_table.get(e.row))
        throw bad("reconnect entry on a zero row");
      if (static_cast<int>(e.targets.size()) != deg[static_cast<std::size_t>(i)])
        throw bad("reconnect list length vs out-degree");
      for (int t : e.targets)
        if (t < 0 || t >= g.r) throw bad("reconnect target range");
    }
  }
}

NetworkState initial_state(const NetworkGenome& g) {
  NetworkState st;
  st.node_states.resize(static_cast<std::size_t>(g.r));
  st.grna_states.assign(static_cast<std::size_t>(g.r), 0);
  for (int i = 0; i < g.r; ++i)
    st.node_states[static_cast<std::size_t>(i)] = g.nodes[static_cast<std::size_t>(i)].start_state;
  for (int i = 0; i < g.r; ++i) {
    const NodeGene& node = g.nodes[static_cast<std::size_t>(i)];
    if (!node.editable) continue;
    std::uint32_t row = 0;
    for (int src : node.grna_inputs)
      row = (row << 1) | st.node_states[static_cast<std::size_t>(src)];
    st.grna_states[static_cast<std::size_t>(i)] =
        static_cast<std::uint8_t>(node.grna_table.get(row));
  }
  return st;
}

void NetworkRunner::bind(const NetworkGenome& g) {
  g_ = &g;
  const int r = g.r;
  const int b = g.b;
  if (r < 1 || static_cast<int>(g.nodes.size()) != r)
    throw std::logic_error("runner: node count mismatch");

  flat_inputs_.assign(static_cast<std::size_t>(r) * b, 0);
  ct_index_.assign(static_cast<std::size_t>(r), -1);
  for (std::size_t j = 0; j < g.coupling_targets.size(); ++j)
    ct_index_[static_cast<std::size_t>(g.coupling_targets[j])] = static_cast<int>(j);

  const bool small_t = g.b <= 6;
  const bool small_g = g.b_prime <= 6;
  t_word_.assign(small_t ? static_cast<std::size_t>(r) : 0, 0);
  t_ptr_.assign(small_t ? 0 : static_cast<std::size_t>(r), nullptr);
  editable_ids_.clear();
  editable_bits_.assign(static_cast<std::size_t>(r), 0);
  flat_grna_inputs_.clear();
  g_word_.clear();
  g_ptr_.clear();

  for (int i = 0; i < r; ++i) {
    const NodeGene& node = g.nodes[static_cast<std::size_t>(i)];
    if (static_cast<int>(node.inputs.size()) != b)
      throw std::logic_error("runner: input slot count");
    if (node.t_table.rows() != std::uint32_t{1} << b)
      throw std::logic_error("runner: t_table size");
    if (small_t)
      t_word_[static_cast<std::size_t>(i)] = node.t_table.words()[0];
    else
      t_ptr_[static_cast<std::size_t>(i)] = &node.t_table;
    for (int s = 0; s < b; ++s) {
      int src = node.inputs[static_cast<std::size_t>(s)];
      if (src == kCouplingSlot) {
        if (s != 0 || ct_index_[static_cast<std::size_t>(i)] < 0)
          throw std::logic_error("runner: stray coupling sentinel");
      } else if (src < 0 || src >= r) {
        throw std::logic_error("runner: input source out of range");
      }
      flat_inputs_[static_cast<std::size_t>(i) * b + s] = src;
    }
    if (node.editable) {
      if (node.grna_table.rows() != std::uint32_t{1} << g.b_prime ||
          static_cast<int>(node.grna_inputs.size()) != g.b_prime)
        throw std::logic_error("runner: gRNA machinery malformed");
      editable_bits_[static_cast<std::size_t>(i)] = 1;
      editable_ids_.push_back(i);
      for (int src : node.grna_inputs) {
        if (src < 0 || src >= r)
          throw std::logic_error("runner: gRNA input out of range");
        flat_grna_inputs_.push_back(src);
      }
      if (small_g)
        g_word_.push_back(node.grna_table.words()[0]);
      else
        g_ptr_.push_back(&node.grna_table);
    }
  }

  // Reverse index: out_slots_[out_begin_[v]..out_begin_[v+1]) lists the flat
  // slot indices fed by v, in ascending slot order.
  out_begin_.assign(static_cast<std::size_t>(r) + 1, 0);
  for (int src : flat_inputs_)
    if (src >= 0) ++out_begin_[static_cast<std::size_t>(src) + 1];
  for (int v = 0; v < r; ++v)
    out_begin_[static_cast<std::size_t>(v) + 1] += out_begin_[static_cast<std::size_t>(v)];
  out_slots_.assign(static_cast<std::size_t>(out_begin_[static_cast<std::size_t>(r)]), 0);
  {
    std::vector<int> cursor(out_begin_.begin(), out_begin_.end() - 1);
    for (std::size_t slot = 0; slot < flat_inputs_.size(); ++slot) {
      int src = flat_inputs_[slot];
      if (src >= 0)
        out_slots_[static_cast<std::size_t>(cursor[static_cast<std::size_t>(src)]++)] =
            static_cast<int>(slot);
    }
  }

  // The one editing invariant the hot path relies on; a violation aborts the
  // run rather than corrupting it.
  for (int v : editable_ids_) {
    const int d = out_begin_[static_cast<std::size_t>(v) + 1] -
                  out_begin_[static_cast<std::size_t>(v)];
    for (const auto& e : g.nodes[static_cast<std::size_t>(v)].reconnect)
      if (static_cast<int>(e.targets.size()) != d)
        throw std::logic_error("runner: reconnect list length != out-degree");
  }

  cur_.assign(static_cast<std::size_t>(r), 0);
  nxt_.assign(static_cast<std::size_t>(r), 0);
  grna_cur_.assign(static_cast<std::size_t>(r), 0);
  grna_nxt_.assign(static_cast<std::size_t>(r), 0);
  missing_.assign(flat_inputs_.size(), 0);
  extra_or_.assign(flat_inputs_.size(), 0);
  touched_missing_.clear();
  touched_extra_.clear();
  trait_buf_.assign(g.trait_ids.size(), 0);
  reset();
}

void NetworkRunner::reset() {
  const NetworkGenome& g = *g_;
  for (int i = 0; i < g.r; ++i)
    cur_[static_cast<std::size_t>(i)] = g.nodes[static_cast<std::size_t>(i)].start_state;
  std::fill(grna_cur_.begin(), grna_cur_.end(), std::uint8_t{0});
  std::fill(grna_nxt_.begin(), grna_nxt_.end(), std::uint8_t{0});
  const int bp = g.b_prime;
  for (std::size_t e = 0; e < editable_ids_.size(); ++e) {
    std::uint32_t row = 0;
    for (int s = 0; s < bp; ++s)
      row = (row << 1) |
            cur_[static_cast<std::size_t>(flat_grna_inputs_[e * static_cast<std::size_t>(bp) +
                                                            static_cast<std::size_t>(s)])];
    const int bit = g_word_.empty()
                        ? g_ptr_[e]->get(row)
                        : static_cast<int>(g_word_[e] >> row & 1u);
    grna_cur_[static_cast<std::size_t>(editable_ids_[e])] = static_cast<std::uint8_t>(bit);
  }
}

void NetworkRunner::load(const NetworkState& st) {
  if (st.node_states.size() != cur_.size() || st.grna_states.size() != grna_cur_.size())
    throw std::invalid_argument("runner: state size mismatch");
  for (std::size_t i = 0; i < cur_.size(); ++i) {
    cur_[i] = st.node_states[i] ? 1 : 0;
    grna_cur_[i] = (editable_bits_[i] && st.grna_states[i]) ? 1 : 0;
  }
}

void NetworkRunner::save(NetworkState& st) const {
  st.node_states.assign(cur_.begin(), cur_.end());
  st.grna_states.assign(grna_cur_.begin(), grna_cur_.end());
}

std::span<const std::uint8_t> NetworkRunner::trait_states() {
  const auto& ids = g_->trait_ids;
  for (std::size_t j = 0; j < ids.size(); ++j)
    trait_buf_[j] = cur_[static_cast<std::size_t>(ids[j])];
  return trait_buf_;
}

void NetworkRunner::step_once(std::span<const std::uint8_t> input,
                              std::span<const std::uint8_t> external_traits,
                              RngStream& rng, StepTrace* trace) {
  const NetworkGenome& g = *g_;
  const int r = g.r;
  const int b = g.b;

  if (static_cast<int>(input.size()) != g.n_input)
    throw std::invalid_argument("step: input size != n_input");
  const bool coupled = g.coupled();
  if (coupled && external_traits.size() != g.coupling_targets.size())
    throw std::invalid_argument("step: external trait size mismatch");
  if (!coupled && !external_traits.empty())
    throw std::invalid_argument("step: external traits on an uncoupled genome");

  if (trace) {
    trace->edited.clear();
    trace->vacated.clear();
    trace->folded.clear();
    trace->dropped_extras.clear();
  }

  for (int i = 0; i < g.n_input; ++i)
    cur_[static_cast<std::size_t>(i)] = input[static_cast<std::size_t>(i)] ? 1 : 0;

  // Editing: vacate the edited node's out-slots, then hand each reconnect
  // target an extra 1 folded into a uniformly drawn non-coupling slot.
  const std::uint8_t* cur = cur_.data();
  bool any_edit = false;
  for (int v = 0; v < r; ++v) {
    if (!(editable_bits_[static_cast<std::size_t>(v)] & cur[v] &
          grna_cur_[static_cast<std::size_t>(v)]))
      continue;
    const NodeGene& node = g.nodes[static_cast<std::size_t>(v)];
    std::uint32_t row = 0;
    for (int src : node.grna_inputs)
      row = (row << 1) | cur[src];
    auto it = std::lower_bound(
        node.reconnect.begin(), node.reconnect.end(), row,
        [](const ReconnectEntry& e, std::uint32_t key) { return e.row < key; });
    if (it == node.reconnect.end() || it->row != row) continue;  // stale gRNA state

    any_edit = true;
    if (trace) trace->edited.push_back(v);
    for (int k = out_begin_[static_cast<std::size_t>(v)];
         k < out_begin_[static_cast<std::size_t>(v) + 1]; ++k) {
      const int slot = out_slots_[static_cast<std::size_t>(k)];
      if (!missing_[static_cast<std::size_t>(slot)]) {
        missing_[static_cast<std::size_t>(slot)] = 1;
        touched_missing_.push_back(slot);
      }
      if (trace) trace->vacated.emplace_back(slot / b, slot % b);
    }
    for (int tgt : it->targets) {
      const bool ct = ct_index_[static_cast<std::size_t>(tgt)] >= 0;
      const int eligible = ct ? b - 1 : b;
      if (eligible == 0) {
        if (trace) trace->dropped_extras.push_back(tgt);
        continue;
      }
      const int s = static_cast<int>(rng.next_index(static_cast<std::uint64_t>(eligible))) +
                    (ct ? 1 : 0);
      const int slot = tgt * b + s;
      if (!extra_or_[static_cast<std::size_t>(slot)]) {
        extra_or_[static_cast<std::size_t>(slot)] = 1;
        touched_extra_.push_back(slot);
      }
      if (trace) trace->folded.emplace_back(tgt, s);
    }
  }

  const int* in = flat_inputs_.data();
  const bool small_t = !t_word_.empty();
  if (!any_edit && !coupled) {
    // Plain synchronous update; by far the hottest loop.
    if (small_t) {
      const std::uint64_t* tw = t_word_.data();
      for (int i = 0; i < r; ++i) {
        std::uint32_t key = 0;
        const int base = i * b;
        for (int s = 0; s < b; ++s)
          key = (key << 1) | cur[in[base + s]];
        nxt_[static_cast<std::size_t>(i)] =
            static_cast<std::uint8_t>(tw[i] >> key & 1u);
      }
    } else {
      for (int i = 0; i < r; ++i) {
        std::uint32_t key = 0;
        const int base = i * b;
        for (int s = 0; s < b; ++s)
          key = (key << 1) | cur[in[base + s]];
        nxt_[static_cast<std::size_t>(i)] =
            static_cast<std::uint8_t>(t_ptr_[static_cast<std::size_t>(i)]->get(key));
      }
    }
  } else {
    for (int i = 0; i < r; ++i) {
      std::uint32_t key = 0;
      const int base = i * b;
      for (int s = 0; s < b; ++s) {
        const int slot = base + s;
        const int src = in[slot];
        std::uint8_t v;
        if (src == kCouplingSlot)
          v = external_traits[static_cast<std::size_t>(ct_index_[static_cast<std::size_t>(i)])]
                  ? 1
                  : 0;
        else
          v = missing_[static_cast<std::size_t>(slot)] ? std::uint8_t{0} : cur[src];
        v |= extra_or_[static_cast<std::size_t>(slot)];
        key = (key << 1) | v;
      }
      nxt_[static_cast<std::size_t>(i)] =
          small_t ? static_cast<std::uint8_t>(t_word_[static_cast<std::size_t>(i)] >> key & 1u)
                  : static_cast<std::uint8_t>(t_ptr_[static_cast<std::size_t>(i)]->get(key));
    }
  }

  // gRNA elements read the raw states of their inputs, never edited wiring.
  const int bp = g.b_prime;
  const bool small_g = !editable_ids_.empty() && !g_word_.empty();
  for (std::size_t e = 0; e < editable_ids_.size(); ++e) {
    std::uint32_t row = 0;
    const std::size_t base = e * static_cast<std::size_t>(bp);
    for (int s = 0; s < bp; ++s)
      row = (row << 1) | cur[flat_grna_inputs_[base + static_cast<std::size_t>(s)]];
    const int bit = small_g ? static_cast<int>(g_word_[e] >> row & 1u) : g_ptr_[e]->get(row);
    grna_nxt_[static_cast<std::size_t>(editable_ids_[e])] = static_cast<std::uint8_t>(bit);
  }

  std::swap(cur_, nxt_);
  std::swap(grna_cur_, grna_nxt_);

  for (int slot : touched_missing_) missing_[static_cast<std::size_t>(slot)] = 0;
  for (int slot : touched_extra_) extra_or_[static_cast<std::size_t>(slot)] = 0;
  touched_missing_.clear();
  touched_extra_.clear();
}

void step(const NetworkGenome& g, NetworkState& st,
          std::span<const std::uint8_t> input,
          std::span<const std::uint8_t> external_traits, RngStream& rng,
          StepTrace* trace) {
  NetworkRunner runner;
  runner.bind(g);
  runner.load(st);
  runner.step_once(input, external_traits, rng, trace);
  runner.save(st);
}

EpisodeResult run_episode(const NetworkGenome& g,
                          std::span<const NkLandscape* const> landscapes,
                          const EpisodeSchedule& schedule, int cycles,
                          RngStream& rng, bool want_trace) {
  if (cycles < 1) throw std::invalid_argument("run_episode: cycles >= 1");
  if (landscapes.empty()) throw std::invalid_argument("run_episode: no landscape");
  if (schedule.switch_cycle >= 0 && landscapes.size() < 2)
    throw std::invalid_argument("run_episode: schedule switches but one landscape given");

  NetworkRunner runner;
  runner.bind(g);
  EpisodeResult res;
  double sum = 0.0;
  for (int c = 0; c < cycles; ++c) {
    const bool after = schedule.switch_cycle >= 0 && c >= schedule.switch_cycle;
    const auto& in = after ? schedule.input_b : schedule.input_a;
    runner.step_once(in, {}, rng);
    auto traits = runner.trait_states();
    const NkLandscape* l = landscapes[after ? 1 : 0];
    sum += evaluate_nk(*l, traits);
    if (want_trace)
      res.trait_trace.emplace_back(traits.begin(), traits.end());
  }
  res.mean_fitness = sum / static_cast<double>(cycles);
  return res;
}

double run_episode_mean(NetworkRunner& runner,
                        std::span<const NkLandscape* const> landscapes,
                        const EpisodeSchedule& schedule, int cycles,
                        RngStream& rng) {
  runner.reset();
  double sum = 0.0;
  for (int c = 0; c < cycles; ++c) {
    const bool after = schedule.switch_cycle >= 0 && c >= schedule.switch_cycle;
    runner.step_once(after ? schedule.input_b : schedule.input_a, {}, rng);
    sum += evaluate_nk(*landscapes[after ? 1 : 0], runner.trait_states());
  }
  return sum / static_cast<double>(cycles);
}

PairEpisodeResult run_pair_episode(NetworkRunner& first, NetworkRunner& second,
                                   const NkcsLandscape& l_first,
                                   const NkcsLandscape& l_second,
                                   const PairEpisodeSpec& spec, RngStream& rng) {
  if (spec.cycles < 1) throw std::invalid_argument("pair episode: cycles >= 1");
  first.reset();
  second.reset();

  auto ext_for = [](NetworkRunner& self, std::span<const std::uint8_t> partner)
      -> std::span<const std::uint8_t> {
    return self.genome().coupled() ? partner : std::span<const std::uint8_t>{};
  };

  // Partner snapshots live in plain vectors: trait_states() views are
  // invalidated by the owner's next step.
  std::vector<std::uint8_t> t1(first.genome().trait_ids.size());
  std::vector<std::uint8_t> t2(second.genome().trait_ids.size());
  auto snap = [](NetworkRunner& x, std::vector<std::uint8_t>& buf) {
    auto t = x.trait_states();
    std::copy(t.begin(), t.end(), buf.begin());
  };

  if (spec.pre_step_first) {
    snap(second, t2);
    first.step_once(spec.input_first, ext_for(first, t2), rng);
  }

  double sum1 = 0.0, sum2 = 0.0;
  for (int c = 0; c < spec.cycles; ++c) {
    snap(second, t2);
    first.step_once(spec.input_first, ext_for(first, t2), rng);
    snap(first, t1);
    sum1 += evaluate_nkcs1(l_first, t1, t2);

    second.step_once(spec.input_second, ext_for(second, t1), rng);
    snap(second, t2);
    sum2 += evaluate_nkcs1(l_second, t2, t1);
  }
  PairEpisodeResult res;
  res.fitness_first = sum1 / static_cast<double>(spec.cycles);
  res.fitness_second = sum2 / static_cast<double>(spec.cycles);
  return res;
}

namespace {

std::string table_hex(const TruthTable& t) {
  // rows/4 hex digits, row 0 in the least significant digit position.
  std::string out;
  const std::uint32_t digits = (t.rows() + 3) / 4;
  for (std::uint32_t d = digits; d-- > 0;) {
    std::uint32_t nib = 0;
    for (std::uint32_t k = 0; k < 4; ++k) {
      std::uint32_t row = d * 4 + k;
      if (row < t.rows() && t.get(row)) nib |= 1u << k;
    }
    out.push_back("0123456789abcdef"[nib]);
  }
  return out;
}

TruthTable table_from_hex(const std::string& hex, std::uint32_t rows) {
  TruthTable t(rows);
  const std::uint32_t digits = (rows + 3) / 4;
  if (hex.size() != digits)
    throw std::invalid_argument("genome: truth table hex length");
  for (std::uint32_t d = 0; d < digits; ++d) {
    char c = hex[digits - 1 - d];
    std::uint32_t nib;
    if (c >= '0' && c <= '9') nib = static_cast<std::uint32_t>(c - '0');
    else if (c >= 'a' && c <= 'f') nib = static_cast<std::uint32_t>(c - 'a' + 10);
    else throw std::invalid_argument("genome: bad hex digit");
    for (std::uint32_t k = 0; k < 4; ++k) {
      std::uint32_t row = d * 4 + k;
      if (row < rows && (nib >> k & 1u)) t.set(row, 1);
    }
  }
  return t;
}

}  // namespace

std::string genome_to_text(const NetworkGenome& g) {
  std::ostringstream out;
  out << "rbnedit-genome 1\n";
  out << g.r << ' ' << g.b << ' ' << g.b_prime << ' ' << g.n_input << '\n';
  out << "traits";
  for (int v : g.trait_ids) out << ' ' << v;
  out << '\n';
  out << "coupling";
  for (int v : g.coupling_targets) out << ' ' << v;
  out << '\n';
  for (const auto& node : g.nodes) {
    out << int{node.start_state} << ' ' << table_hex(node.t_table);
    for (int src : node.inputs) out << ' ' << src;
    out << ' ' << (node.editable ? 1 : 0);
    if (node.editable) {
      out << ' ' << table_hex(node.grna_table);
      for (int src : node.grna_inputs) out << ' ' << src;
      out << ' ' << node.reconnect.size();
      for (const auto& e : node.reconnect) {
        out << ' ' << e.row << ':';
        for (std::size_t k = 0; k < e.targets.size(); ++k) {
          if (k) out << ',';
          out << e.targets[k];
        }
      }
    }
    out << '\n';
  }
  return out.str();
}

namespace {

int take_int(std::istringstream& ss, const char* what) {
  long long v;
  if (!(ss >> v)) throw std::invalid_argument(std::string("genome: expected ") + what);
  return static_cast<int>(v);
}

}  // namespace

NetworkGenome genome_from_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "rbnedit-genome 1")
    throw std::invalid_argument("genome: bad magic line");
  if (!std::getline(in, line)) throw std::invalid_argument("genome: missing header");
  NetworkGenome g;
  {
    std::istringstream ss(line);
    g.r = take_int(ss, "r");
    g.b = take_int(ss, "b");
    g.b_prime = take_int(ss, "b_prime");
    g.n_input = take_int(ss, "n_input");
  }
  if (g.r < 1 || g.b < 1 || g.b_prime < 1)
    throw std::invalid_argument("genome: bad dimensions");
  auto read_id_line = [&](const char* tag) {
    if (!std::getline(in, line))
      throw std::invalid_argument(std::string("genome: missing ") + tag + " line");
    std::istringstream ss(line);
    std::string head;
    ss >> head;
    if (head != tag)
      throw std::invalid_argument(std::string("genome: expected ") + tag + " line");
    std::vector<int> ids;
    int v;
    while (ss >> v) ids.push_back(v);
    return ids;
  };
  g.trait_ids = read_id_line("traits");
  g.coupling_targets = read_id_line("coupling");

  const auto t_rows = std::uint32_t{1} << g.b;
  const auto g_rows = std::uint32_t{1} << g.b_prime;
  g.nodes.resize(static_cast<std::size_t>(g.r));
  for (int i = 0; i < g.r; ++i) {
    if (!std::getline(in, line)) throw std::invalid_argument("genome: missing node line");
    std::istringstream ss(line);
    NodeGene& node = g.nodes[static_cast<std::size_t>(i)];
    node.start_state = static_cast<std::uint8_t>(take_int(ss, "start state"));
    std::string hex;
    if (!(ss >> hex)) throw std::invalid_argument("genome: missing t_table");
    node.t_table = table_from_hex(hex, t_rows);
    node.inputs.resize(static_cast<std::size_t>(g.b));
    for (auto& src : node.inputs) src = take_int(ss, "input id");
    node.editable = take_int(ss, "editable flag") != 0;
    if (node.editable) {
      if (!(ss >> hex)) throw std::invalid_argument("genome: missing grna_table");
      node.grna_table = table_from_hex(hex, g_rows);
      node.grna_inputs.resize(static_cast<std::size_t>(g.b_prime));
      for (auto& src : node.grna_inputs) src = take_int(ss, "grna input id");
      int n_entries = take_int(ss, "reconnect entry count");
      node.reconnect.resize(static_cast<std::size_t>(n_entries));
      for (auto& e : node.reconnect) {
        std::string tok;
        if (!(ss >> tok)) throw std::invalid_argument("genome: missing reconnect entry");
        auto colon = tok.find(':');
        if (colon == std::string::npos)
          throw std::invalid_argument("genome: reconnect entry needs row:targets");
        e.row = static_cast<std::uint32_t>(std::stoul(tok.substr(0, colon)));
        e.targets.clear();
        std::string rest = tok.substr(colon + 1);
        if (!rest.empty()) {
          std::istringstream ts(rest);
          std::string part;
          while (std::getline(ts, part, ','))
            e.targets.push_back(std::stoi(part));
        }
      }
    }
  }
  check_invariants(g);
  return g;
}

}  // namespace rbnedit
