#include "geonarrate/abduce.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <stdexcept>

namespace geonarrate {

bool c_consistent(const SpatialState& state) {
  ConstraintNetwork topo = state.topo;
  if (!state.size) return algebraic_closure(std::move(topo)).consistent;
  ConstraintNetwork size = *state.size;
  // Interleave per-calculus closure with interaction refinement until stable.
  for (;;) {
    ClosureResult tr = algebraic_closure(std::move(topo));
    if (!tr.consistent) return false;
    topo = std::move(tr.network);
    ClosureResult sr = algebraic_closure(std::move(size));
    if (!sr.consistent) return false;
    size = std::move(sr.network);
    bool changed = false;
    for (auto [i, j] : topo.active_pairs()) {
      int si = size.index_of(topo.variable(i).name);
      int sj = size.index_of(topo.variable(j).name);
      if (si < 0 || sj < 0) continue;
      RelationSet t = topo.label(i, j) & topo_compatible_with_size(size.label(si, sj));
      RelationSet s = size.label(si, sj) & size_entailed(topo.label(i, j));
      if (t.empty() || s.empty()) return false;
      if (t != topo.label(i, j)) {
        topo.set_label(i, j, t);
        changed = true;
      }
      if (s != size.label(si, sj)) {
        size.set_label(si, sj, s);
        changed = true;
      }
    }
    if (!changed) return true;
  }
}

ClosureResult monotonic_extension(const ConstraintNetwork& partial) {
  return algebraic_closure(partial);
}

// --- interpolation ----------------------------------------------------------

namespace {

bool same_existence(const ConstraintNetwork& a, const ConstraintNetwork& b) {
  if (a.size() != b.size()) return false;
  for (int i = 0; i < a.size(); ++i) {
    if (a.variable(i).name != b.variable(i).name || a.variable(i).exists != b.variable(i).exists) {
      return false;
    }
  }
  return true;
}

}  // namespace

InterpolationResult interpolate(const ConstraintNetwork& from, const ConstraintNetwork& to,
                                int max_steps) {
  if (!same_existence(from, to)) {
    throw std::invalid_argument("interpolate needs states over one existence set");
  }
  if (!is_scenario(from) || !is_scenario(to)) {
    throw std::invalid_argument("interpolate needs scenario states");
  }
  const Calculus& calc = from.calculus();
  InterpolationResult result;
  if (!algebraic_closure(from).consistent || !algebraic_closure(to).consistent) return result;

  struct NodeInfo {
    int depth = 0;
    std::vector<std::string> parents;
    ConstraintNetwork state;
  };
  std::map<std::string, NodeInfo> nodes;
  std::vector<std::string> frontier;
  std::string start_key = from.state_key();
  std::string goal_key = to.state_key();
  nodes.emplace(start_key, NodeInfo{0, {}, from});
  frontier.push_back(start_key);

  auto pairs = from.active_pairs();
  int depth = 0;
  bool reached = start_key == goal_key;
  while (!reached && depth < max_steps && !frontier.empty()) {
    ++depth;
    std::vector<std::string> next_frontier;
    for (const std::string& key : frontier) {
      ConstraintNetwork state = nodes.at(key).state;
      // Cartesian product over pairs: keep the relation or move to one
      // conceptual neighbor. At least one pair must move.
      std::vector<std::vector<int>> options(pairs.size());
      for (size_t p = 0; p < pairs.size(); ++p) {
        int cur = state.label(pairs[p].first, pairs[p].second).first();
        options[p].push_back(cur);
        for (int nb : calc.neighbors(cur)) options[p].push_back(nb);
      }
      std::vector<size_t> pick(pairs.size(), 0);
      for (;;) {
        bool moved = false;
        ConstraintNetwork candidate = state;
        for (size_t p = 0; p < pairs.size(); ++p) {
          int relation = options[p][pick[p]];
          if (pick[p] != 0) moved = true;
          candidate.set_label(pairs[p].first, pairs[p].second, RelationSet::single(relation));
        }
        if (moved && algebraic_closure(candidate).consistent) {
          std::string ck = candidate.state_key();
          auto it = nodes.find(ck);
          if (it == nodes.end()) {
            nodes.emplace(ck, NodeInfo{depth, {key}, candidate});
            next_frontier.push_back(ck);
            if (ck == goal_key) reached = true;
          } else if (it->second.depth == depth) {
            it->second.parents.push_back(key);
          }
        }
        size_t p = 0;
        while (p < pairs.size() && ++pick[p] == options[p].size()) pick[p++] = 0;
        if (p == pairs.size()) break;
      }
    }
    frontier = std::move(next_frontier);
  }
  if (!reached) return result;

  result.found = true;
  // Walk all shortest paths backwards from the goal.
  std::vector<std::vector<ConstraintNetwork>> sequences;
  std::vector<std::string> path{goal_key};
  auto walk = [&](auto&& self, const std::string& key) -> void {
    if (key == start_key) {
      std::vector<ConstraintNetwork> seq;
      for (auto it = path.rbegin(); it != path.rend(); ++it) seq.push_back(nodes.at(*it).state);
      sequences.push_back(std::move(seq));
      return;
    }
    for (const std::string& parent : nodes.at(key).parents) {
      path.push_back(parent);
      self(self, parent);
      path.pop_back();
    }
  };
  walk(walk, goal_key);
  result.sequences = std::move(sequences);
  return result;
}

// --- narrative completion search --------------------------------------------

namespace {

struct Move {
  EventKind kind;
  std::vector<int> vars;  // indices into the universe template
  int relation = -1;      // transitions

  bool operator<(const Move& o) const {
    if (kind != o.kind) return kind < o.kind;
    if (vars != o.vars) return vars < o.vars;
    return relation < o.relation;
  }
  bool operator==(const Move& o) const = default;
};

// Applies a move; empty optional when a precondition fails or the result is
// inconsistent. Newly existing objects start with universal labels, refined
// by closure; vanished objects drop their labels.
std::optional<ConstraintNetwork> apply_move(const ConstraintNetwork& state, const Move& move) {
  const Calculus& calc = state.calculus();
  ConstraintNetwork next = state;
  auto reset_labels = [&](int v) {
    for (int k = 0; k < next.size(); ++k) {
      if (k != v) next.set_label(v, k, calc.universal());
    }
  };
  switch (move.kind) {
    case EventKind::appearance: {
      int v = move.vars[0];
      if (next.variable(v).exists) return std::nullopt;
      reset_labels(v);
      next.variable(v).exists = true;
      break;
    }
    case EventKind::disappearance: {
      int v = move.vars[0];
      if (!next.variable(v).exists) return std::nullopt;
      next.variable(v).exists = false;
      reset_labels(v);
      break;
    }
    case EventKind::transition: {
      int i = move.vars[0], j = move.vars[1];
      if (!next.variable(i).exists || !next.variable(j).exists) return std::nullopt;
      RelationSet current = next.label(i, j);
      if (current == RelationSet::single(move.relation)) return std::nullopt;
      bool possible = false;
      for (int r : current) {
        if (calc.neighbors(r).contains(move.relation)) possible = true;
      }
      if (!possible) return std::nullopt;
      next.set_label(i, j, RelationSet::single(move.relation));
      break;
    }
    case EventKind::split: {
      int parent = move.vars[0];
      if (!next.variable(parent).exists) return std::nullopt;
      for (size_t c = 1; c < move.vars.size(); ++c) {
        if (next.variable(move.vars[c]).exists) return std::nullopt;
      }
      next.variable(parent).exists = false;
      reset_labels(parent);
      RelationSet apart = rel(Rcc8::dc) | rel(Rcc8::ec);
      for (size_t c = 1; c < move.vars.size(); ++c) {
        int v = move.vars[c];
        reset_labels(v);
        next.variable(v).exists = true;
      }
      for (size_t c = 1; c < move.vars.size(); ++c) {
        for (size_t d = c + 1; d < move.vars.size(); ++d) {
          next.set_label(move.vars[c], move.vars[d], apart);
        }
      }
      break;
    }
    case EventKind::merge: {
      int result = move.vars.back();
      if (next.variable(result).exists) return std::nullopt;
      RelationSet apart = rel(Rcc8::dc) | rel(Rcc8::ec);
      for (size_t c = 0; c + 1 < move.vars.size(); ++c) {
        int v = move.vars[c];
        if (!next.variable(v).exists) return std::nullopt;
        for (size_t d = c + 1; d + 1 < move.vars.size(); ++d) {
          RelationSet refined = next.label(v, move.vars[d]) & apart;
          if (refined.empty()) return std::nullopt;  // parts can never separate
          next.set_label(v, move.vars[d], refined);
        }
      }
      // Part adjacency must be jointly realizable before the parts go away.
      if (!algebraic_closure(next).consistent) return std::nullopt;
      for (size_t c = 0; c + 1 < move.vars.size(); ++c) {
        next.variable(move.vars[c]).exists = false;
        reset_labels(move.vars[c]);
      }
      reset_labels(result);
      next.variable(result).exists = true;
      break;
    }
    default:
      return std::nullopt;
  }
  ClosureResult closed = algebraic_closure(std::move(next));
  if (!closed.consistent) return std::nullopt;
  return std::move(closed.network);
}

// Target satisfaction: every asserted existence matches and every
// constrained pair's label is a subset of the observed one.
bool satisfies(const ConstraintNetwork& state, const ConstraintNetwork& target,
               const std::vector<int>& target_to_state) {
  for (int t = 0; t < target.size(); ++t) {
    if (state.variable(target_to_state[t]).exists != target.variable(t).exists) return false;
  }
  for (auto [ti, tj] : target.active_pairs()) {
    RelationSet want = target.label(ti, tj);
    if (want == target.calculus().universal()) continue;
    int i = target_to_state[ti], j = target_to_state[tj];
    if (!state.label(i, j).subset_of(want)) return false;
  }
  return true;
}

// Admissible lower bound on the remaining move count.
int heuristic(const ConstraintNetwork& state, const ConstraintNetwork& target,
              const std::vector<int>& target_to_state, const AbduceOptions& opts) {
  const Calculus& calc = state.calculus();
  int existence_deficit = 0;
  for (int t = 0; t < target.size(); ++t) {
    if (state.variable(target_to_state[t]).exists != target.variable(t).exists) {
      ++existence_deficit;
    }
  }
  bool grouped = opts.abducibles.count(EventKind::split) || opts.abducibles.count(EventKind::merge);
  int per_move = grouped ? opts.max_group + 1 : 1;
  int h = (existence_deficit + per_move - 1) / per_move;
  for (auto [ti, tj] : target.active_pairs()) {
    RelationSet want = target.label(ti, tj);
    if (want == calc.universal()) continue;
    int i = target_to_state[ti], j = target_to_state[tj];
    if (!state.variable(i).exists || !state.variable(j).exists) continue;
    RelationSet have = state.label(i, j);
    if (!have.singleton() || have.subset_of(want)) continue;
    int best = -1;
    for (int w : want) {
      int d = calc.cnd_distance(have.first(), w);
      if (best < 0 || d < best) best = d;
    }
    h += best;
  }
  return h;
}

std::vector<Move> generate_moves(const ConstraintNetwork& state, const AbduceOptions& opts) {
  const Calculus& calc = state.calculus();
  std::vector<Move> moves;
  if (opts.abducibles.count(EventKind::appearance)) {
    for (int v = 0; v < state.size(); ++v) {
      if (!state.variable(v).exists) moves.push_back({EventKind::appearance, {v}});
    }
  }
  if (opts.abducibles.count(EventKind::disappearance)) {
    for (int v = 0; v < state.size(); ++v) {
      if (state.variable(v).exists) moves.push_back({EventKind::disappearance, {v}});
    }
  }
  if (opts.abducibles.count(EventKind::transition)) {
    for (auto [i, j] : state.active_pairs()) {
      RelationSet current = state.label(i, j);
      RelationSet reachable;
      for (int r : current) reachable |= calc.neighbors(r);
      for (int r : reachable) {
        if (current == RelationSet::single(r)) continue;
        moves.push_back({EventKind::transition, {i, j}, r});
      }
    }
  }
  auto grouped_moves = [&](EventKind kind) {
    // split: existing whole -> non-existing same-typed parts;
    // merge: existing same-typed parts -> non-existing whole.
    const bool is_split = kind == EventKind::split;
    for (int whole = 0; whole < state.size(); ++whole) {
      if (state.variable(whole).exists != is_split) continue;
      const std::string& type = state.variable(whole).type;
      std::vector<int> pool;
      for (int v = 0; v < state.size(); ++v) {
        if (v == whole) continue;
        if (state.variable(v).exists == is_split) continue;
        if (state.variable(v).type != type) continue;
        pool.push_back(v);
      }
      std::vector<int> parts;
      auto pick = [&](auto&& self, size_t from) -> void {
        if (parts.size() >= 2) {
          Move m;
          m.kind = kind;
          if (is_split) {
            m.vars.push_back(whole);
            m.vars.insert(m.vars.end(), parts.begin(), parts.end());
          } else {
            m.vars = parts;
            m.vars.push_back(whole);
          }
          moves.push_back(std::move(m));
        }
        if (parts.size() >= static_cast<size_t>(opts.max_group)) return;
        for (size_t p = from; p < pool.size(); ++p) {
          parts.push_back(pool[p]);
          self(self, p + 1);
          parts.pop_back();
        }
      };
      pick(pick, 0);
    }
  };
  if (opts.abducibles.count(EventKind::split)) grouped_moves(EventKind::split);
  if (opts.abducibles.count(EventKind::merge)) grouped_moves(EventKind::merge);
  std::sort(moves.begin(), moves.end());
  return moves;
}

EventOccurrence move_to_event(const ConstraintNetwork& state, const Move& move, int segment) {
  EventOccurrence ev;
  ev.kind = move.kind;
  for (int v : move.vars) ev.participants.push_back(state.variable(v).name);
  if (move.kind == EventKind::transition) ev.target = static_cast<Rcc8>(move.relation);
  ev.time_index = segment;  // symbolic: between observation `segment` and the next
  ev.abduced = true;
  return ev;
}

std::string event_signature(const EventOccurrence& ev) {
  std::string s = event_kind_name(ev.kind);
  for (const std::string& p : ev.participants) s += "," + p;
  if (ev.target) s += ";" + std::to_string(static_cast<int>(*ev.target));
  return s;
}

struct SegmentSearch {
  bool satisfiable = false;
  bool budget_exhausted = false;
  // Minimal move sequences, deduplicated by event multiset.
  std::vector<std::vector<Move>> sequences;
  int cost = 0;
};

SegmentSearch search_segment(const ConstraintNetwork& start, const ConstraintNetwork& target,
                             const std::vector<int>& target_to_state, const AbduceOptions& opts) {
  SegmentSearch out;
  struct NodeInfo {
    int g = 0;
    ConstraintNetwork state;
    std::vector<std::pair<std::string, Move>> parents;  // minimal-g predecessors
  };
  std::map<std::string, NodeInfo> nodes;
  struct QueueItem {
    int f, g;
    std::uint64_t seq;
    std::string key;
    bool operator>(const QueueItem& o) const {
      if (f != o.f) return f > o.f;
      if (g != o.g) return g > o.g;
      return seq > o.seq;
    }
  };
  std::priority_queue<QueueItem, std::vector<QueueItem>, std::greater<QueueItem>> open;
  std::uint64_t seq = 0;

  std::string start_key = start.state_key();
  nodes.emplace(start_key, NodeInfo{0, start, {}});
  open.push({heuristic(start, target, target_to_state, opts), 0, seq++, start_key});

  int goal_cost = -1;
  std::vector<std::string> goal_keys;
  std::size_t expanded = 0;
  std::map<std::string, char> closed;

  while (!open.empty()) {
    QueueItem item = open.top();
    open.pop();
    if (goal_cost >= 0 && item.f > goal_cost) break;
    if (closed.count(item.key)) continue;
    closed[item.key] = 1;
    const ConstraintNetwork state = nodes.at(item.key).state;
    if (satisfies(state, target, target_to_state)) {
      if (goal_cost < 0) goal_cost = item.g;
      if (item.g == goal_cost) goal_keys.push_back(item.key);
      continue;  // successors of a goal can only be longer
    }
    if (++expanded > opts.budget) {
      out.budget_exhausted = true;
      return out;
    }
    for (const Move& move : generate_moves(state, opts)) {
      auto next = apply_move(state, move);
      if (!next) continue;
      std::string key = next->state_key();
      auto it = nodes.find(key);
      int g = item.g + 1;
      if (it == nodes.end()) {
        NodeInfo info;
        info.g = g;
        info.state = std::move(*next);
        info.parents.emplace_back(item.key, move);
        nodes.emplace(key, std::move(info));
        int h = heuristic(nodes.at(key).state, target, target_to_state, opts);
        open.push({g + h, g, seq++, key});
      } else if (it->second.g == g && !closed.count(key)) {
        it->second.parents.emplace_back(item.key, move);
      }
    }
  }
  if (goal_cost < 0) return out;  // unsatisfiable within the abducible set

  out.satisfiable = true;
  out.cost = goal_cost;
  // Reconstruct every minimal path, then deduplicate orderings of one
  // event multiset (Happens facts with interchangeable placements).
  std::map<std::string, std::vector<Move>> unique;
  std::vector<Move> tail;
  auto walk = [&](auto&& self, const std::string& key) -> void {
    const NodeInfo& node = nodes.at(key);
    if (node.parents.empty()) {
      std::vector<Move> seq_moves(tail.rbegin(), tail.rend());
      std::vector<Move> sorted = seq_moves;
      std::sort(sorted.begin(), sorted.end());
      std::string sig;
      for (const Move& m : sorted) {
        sig += std::to_string(static_cast<int>(m.kind)) + ":";
        for (int v : m.vars) sig += std::to_string(v) + ",";
        sig += "/" + std::to_string(m.relation) + ";";
      }
      auto it = unique.find(sig);
      if (it == unique.end() || seq_moves < it->second) unique[sig] = std::move(seq_moves);
      return;
    }
    for (const auto& [parent, move] : node.parents) {
      if (nodes.at(parent).g + 1 != node.g) continue;
      tail.push_back(move);
      self(self, parent);
      tail.pop_back();
    }
  };
  std::sort(goal_keys.begin(), goal_keys.end());
  goal_keys.erase(std::unique(goal_keys.begin(), goal_keys.end()), goal_keys.end());
  for (const std::string& gk : goal_keys) walk(walk, gk);
  for (auto& [sig, seq_moves] : unique) out.sequences.push_back(std::move(seq_moves));
  std::sort(out.sequences.begin(), out.sequences.end());
  return out;
}

}  // namespace

ExplainResult explain(const std::vector<ConstraintNetwork>& observations,
                      const AbduceOptions& opts) {
  if (observations.size() < 2) {
    throw std::invalid_argument("explain needs at least two observations");
  }
  const Calculus& calc = observations.front().calculus();

  // Universe template: every variable mentioned anywhere, in first-seen order.
  ConstraintNetwork universe(calc);
  for (const ConstraintNetwork& obs : observations) {
    for (int v = 0; v < obs.size(); ++v) {
      if (universe.index_of(obs.variable(v).name) < 0) {
        Variable var = obs.variable(v);
        var.exists = false;
        universe.add_variable(var);
      }
    }
  }
  auto instantiate = [&](const ConstraintNetwork& obs) {
    ConstraintNetwork state = universe;
    for (int v = 0; v < obs.size(); ++v) {
      state.variable(state.index_of(obs.variable(v).name)).exists = obs.variable(v).exists;
    }
    for (auto [i, j] : obs.active_pairs()) {
      state.set_label(state.index_of(obs.variable(i).name),
                      state.index_of(obs.variable(j).name), obs.label(i, j));
    }
    return state;
  };

  ExplainResult result;
  std::vector<SegmentSearch> segments;
  for (size_t k = 0; k + 1 < observations.size(); ++k) {
    ConstraintNetwork source = instantiate(observations[k]);
    ClosureResult extended = monotonic_extension(source);
    if (!extended.consistent) {
      throw std::invalid_argument("observation " + std::to_string(k + 1) + " is inconsistent");
    }
    ConstraintNetwork target = instantiate(observations[k + 1]);
    std::vector<int> identity(target.size());
    for (int i = 0; i < target.size(); ++i) identity[i] = i;
    SegmentSearch seg = search_segment(extended.network, target, identity, opts);
    if (seg.budget_exhausted) {
      result.budget_exhausted = true;
      return result;
    }
    if (!seg.satisfiable) return result;  // no event sequence within the abducibles
    segments.push_back(std::move(seg));
  }

  // Cartesian combination over segments (each segment's minimum is forced).
  std::vector<Explanation> combos{Explanation{}};
  for (size_t k = 0; k < segments.size(); ++k) {
    std::vector<Explanation> next;
    for (const Explanation& base : combos) {
      for (const std::vector<Move>& seq_moves : segments[k].sequences) {
        Explanation e = base;
        const ConstraintNetwork& naming = universe;
        int position = 0;
        for (const Move& m : seq_moves) {
          PlacedEvent pe;
          pe.event = move_to_event(naming, m, static_cast<int>(k + 1));
          pe.segment = static_cast<int>(k + 1);
          pe.position = position++;
          e.moves.push_back(pe);
        }
        e.cost += static_cast<int>(seq_moves.size());
        next.push_back(std::move(e));
      }
    }
    combos = std::move(next);
  }

  // Expand composite events into presentation records with orderings.
  for (Explanation& e : combos) {
    for (const PlacedEvent& pe : e.moves) {
      const EventOccurrence& ev = pe.event;
      if (ev.kind == EventKind::split || ev.kind == EventKind::merge) {
        const bool is_split = ev.kind == EventKind::split;
        std::string whole = is_split ? ev.participants.front() : ev.participants.back();
        std::vector<std::string> parts(ev.participants.begin() + (is_split ? 1 : 0),
                                       ev.participants.end() - (is_split ? 0 : 1));
        // The side that vanishes goes first; the composite event closes it.
        std::vector<int> first_records, last_records;
        auto push_record = [&](EventKind kind, std::vector<std::string> who) {
          PlacedEvent rec = pe;
          rec.event.kind = kind;
          rec.event.participants = std::move(who);
          rec.event.target = std::nullopt;
          e.records.push_back(rec);
          return static_cast<int>(e.records.size() - 1);
        };
        if (is_split) {
          first_records.push_back(push_record(EventKind::disappearance, {whole}));
          for (const std::string& p : parts) {
            last_records.push_back(push_record(EventKind::appearance, {p}));
          }
        } else {
          for (const std::string& p : parts) {
            first_records.push_back(push_record(EventKind::disappearance, {p}));
          }
          last_records.push_back(push_record(EventKind::appearance, {whole}));
        }
        e.records.push_back(pe);
        last_records.push_back(static_cast<int>(e.records.size() - 1));
        for (int f : first_records) {
          for (int l : last_records) e.orderings.emplace_back(f, l);
        }
      } else {
        e.records.push_back(pe);
      }
    }
  }

  // Deterministic output order: cost, then lexicographic event encoding.
  std::sort(combos.begin(), combos.end(), [](const Explanation& a, const Explanation& b) {
    if (a.cost != b.cost) return a.cost < b.cost;
    auto encode = [](const Explanation& e) {
      std::string s;
      for (const PlacedEvent& pe : e.moves) {
        s += std::to_string(pe.segment) + "/" + std::to_string(pe.position) + "/" +
             event_signature(pe.event) + "|";
      }
      return s;
    };
    return encode(a) < encode(b);
  });
  result.satisfiable = true;
  result.explanations = std::move(combos);
  return result;
}

}  // namespace geonarrate
