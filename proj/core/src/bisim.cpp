// Equivalence verdicts on a disjoint union, with divergence witnesses.

#include <algorithm>
#include <deque>

#include "graph.hpp"
#include "linchk/bisim.hpp"

namespace linchk {

std::size_t Verdict::stat(const std::string& key) const {
  for (const auto& [k, v] : stats) {
    if (k == key) return v;
  }
  return 0;
}

namespace {

PathStep step_of(const Lts& lts, std::size_t index, StateId offset) {
  const Transition& t = lts.transitions()[index];
  return {t.src - offset, lts.label(t.label).aut_text(), std::string(lts.note(index)),
          t.dst - offset};
}

/// Shortest path from `from` to a state satisfying `goal`, using transitions
/// accepted by `use`. Returns transition indices.
template <class Goal, class Use>
std::optional<std::vector<std::size_t>> shortest_path(const Lts& lts, StateId from, Goal goal,
                                                      Use use) {
  const std::size_t none = static_cast<std::size_t>(-1);
  std::vector<std::size_t> via(lts.state_count(), none);
  std::vector<char> seen(lts.state_count(), 0);
  std::deque<StateId> queue{from};
  seen[from] = 1;
  while (!queue.empty()) {
    StateId s = queue.front();
    queue.pop_front();
    if (goal(s)) {
      std::vector<std::size_t> path;
      for (StateId v = s; v != from;) {
        path.push_back(via[v]);
        v = lts.transitions()[via[v]].src;
      }
      std::reverse(path.begin(), path.end());
      return path;
    }
    std::size_t base = lts.out_begin(s);
    auto out = lts.out(s);
    for (std::size_t i = 0; i < out.size(); ++i) {
      const auto& t = out[i];
      if (seen[t.dst] || !use(t)) continue;
      seen[t.dst] = 1;
      via[t.dst] = base + i;
      queue.push_back(t.dst);
    }
  }
  return std::nullopt;
}

/// Prefix to `d`, then an inert internal path to a state on an inert cycle,
/// then that cycle.
Lasso lasso_at(const Lts& u, const Partition& p, const std::vector<char>& div, StateId d,
               StateId init, StateId offset, int side) {
  Lasso l;
  l.side = side;
  auto inert = [&](const Transition& t) {
    return t.label == kTau && p.block_of(t.src) == p.block_of(t.dst);
  };
  auto all = [](const Transition&) { return true; };
  auto prefix = shortest_path(u, init, [&](StateId s) { return s == d; }, all);
  for (auto i : *prefix) l.prefix.push_back(step_of(u, i, offset));

  // States on an inert cycle.
  auto off = detail::offsets_of(u.state_count(), u.transitions());
  auto scc = detail::tarjan(u.state_count(), u.transitions(), off, inert);
  std::vector<std::uint32_t> size(scc.count, 0);
  for (auto k : scc.of) ++size[k];
  auto on_cycle = [&](StateId s) {
    if (size[scc.of[s]] > 1) return true;
    for (const auto& t : u.out(s)) {
      if (t.dst == s && inert(t)) return true;
    }
    return false;
  };
  auto stem = shortest_path(
      u, d, [&](StateId s) { return div[s] && on_cycle(s); },
      [&](const Transition& t) { return inert(t) && div[t.dst]; });
  StateId c = d;
  for (auto i : *stem) {
    l.stem.push_back(step_of(u, i, offset));
    c = u.transitions()[i].dst;
  }
  // Shortest cycle through c.
  std::optional<std::vector<std::size_t>> best;
  std::size_t base = u.out_begin(c);
  auto out = u.out(c);
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!inert(out[i])) continue;
    std::vector<std::size_t> cyc{base + i};
    if (out[i].dst != c) {
      auto back = shortest_path(u, out[i].dst, [&](StateId x) { return x == c; }, inert);
      if (!back) continue;
      cyc.insert(cyc.end(), back->begin(), back->end());
    }
    if (!best || cyc.size() < best->size()) best = std::move(cyc);
  }
  for (auto i : *best) l.cycle.push_back(step_of(u, i, offset));
  return l;
}

}  // namespace

Verdict bisimilar(const Lts& a, const Lts& b, EquivalenceKind kind) {
  Lts u = disjoint_union(a, b);
  const auto offset = static_cast<StateId>(a.state_count());
  const StateId init_a = a.initial(), init_b = b.initial() + offset;
  Partition p = partition_of(u, kind);
  Verdict v;
  v.stats = {{"union_states", u.state_count()},
             {"union_transitions", u.transition_count()},
             {"blocks", p.block_count()}};
  v.pass = p.same_block(init_a, init_b);
  v.message = std::string(v.pass ? "equivalent" : "not equivalent") + " under " +
              std::string(to_string(kind));
  if (v.pass) return v;
  v.initial_blocks = {p.block_of(init_a), p.block_of(init_b)};
  if (kind != EquivalenceKind::branching_div) return v;

  // Prefer a divergent state whose branching class holds a non-divergent
  // state of the other side: there divergence alone separates the two.
  auto div = divergence_flags(u, p);
  Partition br = branching_partition(u);
  auto side_of = [&](StateId s) { return s < offset ? 0 : 1; };
  std::optional<StateId> pick;
  for (StateId s = 0; s < u.state_count() && !pick; ++s) {
    if (!div[s]) continue;
    for (StateId o : br.block(br.block_of(s))) {
      if (side_of(o) != side_of(s) && !div[o]) {
        pick = s;
        break;
      }
    }
  }
  for (StateId s = 0; s < u.state_count() && !pick; ++s) {
    if (!div[s]) continue;
    const auto& blk = p.block(p.block_of(s));
    if (std::none_of(blk.begin(), blk.end(), [&](StateId o) { return side_of(o) != side_of(s); })) {
      pick = s;
    }
  }
  if (!pick) return v;
  int side = side_of(*pick);
  // The lasso must start from the initial state of its own side.
  auto reachable = [&](StateId from, StateId to) {
    return shortest_path(u, from, [&](StateId x) { return x == to; },
                         [](const Transition&) { return true; })
        .has_value();
  };
  StateId init = side == 0 ? init_a : init_b;
  if (!reachable(init, *pick)) return v;
  v.lasso = lasso_at(u, p, div, *pick, init, side == 0 ? 0 : offset, side);
  v.message += side == 0 ? " (first system diverges)" : " (second system diverges)";
  return v;
}

}  // namespace linchk
