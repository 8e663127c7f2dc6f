// Partitions, strong bisimulation, quotients and the naive branching oracle.

#include <algorithm>
#include <deque>
#include <tuple>
#include <unordered_map>

#include "graph.hpp"
#include "linchk/bisim.hpp"
#include "linchk/errors.hpp"

namespace linchk {

namespace detail {

Graph graph_of(const Lts& lts) {
  Graph g;
  g.n = lts.state_count();
  g.label_count = static_cast<std::uint32_t>(lts.labels().size());
  g.edges = lts.transitions();
  return g;
}

std::vector<std::size_t> offsets_of(std::size_t n, const std::vector<Transition>& edges) {
  std::vector<std::size_t> off(n + 1, 0);
  for (const auto& t : edges) ++off[t.src + 1];
  for (std::size_t i = 0; i < n; ++i) off[i + 1] += off[i];
  return off;
}

std::vector<std::uint32_t> strong_refine(const Graph& g) {
  // Incoming edges grouped by target, then label.
  std::vector<Transition> in = g.edges;
  std::sort(in.begin(), in.end(), [](const Transition& a, const Transition& b) {
    return std::tie(a.dst, a.label, a.src) < std::tie(b.dst, b.label, b.src);
  });
  std::vector<std::size_t> in_off(g.n + 1, 0);
  for (const auto& t : in) ++in_off[t.dst + 1];
  for (std::size_t i = 0; i < g.n; ++i) in_off[i + 1] += in_off[i];

  std::vector<std::uint32_t> block_of(g.n, 0);
  std::vector<std::vector<StateId>> blocks(1);
  for (StateId s = 0; s < g.n; ++s) blocks[0].push_back(s);
  if (g.n == 0) return block_of;

  std::deque<std::uint32_t> work{0};
  std::vector<char> queued{1};
  std::vector<std::uint32_t> mark(g.n, 0);
  std::uint32_t stamp = 0;
  std::vector<std::pair<LabelId, StateId>> pre;

  while (!work.empty()) {
    std::uint32_t b = work.front();
    work.pop_front();
    queued[b] = 0;
    pre.clear();
    for (StateId t : blocks[b]) {
      for (std::size_t i = in_off[t]; i < in_off[t + 1]; ++i) pre.emplace_back(in[i].label, in[i].src);
    }
    std::sort(pre.begin(), pre.end());
    pre.erase(std::unique(pre.begin(), pre.end()), pre.end());
    for (std::size_t i = 0; i < pre.size();) {
      std::size_t j = i;
      ++stamp;
      std::vector<std::uint32_t> touched;
      while (j < pre.size() && pre[j].first == pre[i].first) {
        StateId s = pre[j].second;
        mark[s] = stamp;
        touched.push_back(block_of[s]);
        ++j;
      }
      std::sort(touched.begin(), touched.end());
      touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
      for (std::uint32_t c : touched) {
        std::vector<StateId> in_part, out_part;
        for (StateId s : blocks[c]) (mark[s] == stamp ? in_part : out_part).push_back(s);
        if (out_part.empty()) continue;
        auto fresh = static_cast<std::uint32_t>(blocks.size());
        blocks[c] = std::move(out_part);
        for (StateId s : in_part) block_of[s] = fresh;
        blocks.push_back(std::move(in_part));
        queued.push_back(0);
        for (std::uint32_t x : {c, fresh}) {
          if (!queued[x]) {
            queued[x] = 1;
            work.push_back(x);
          }
        }
      }
      i = j;
    }
  }
  return block_of;
}

}  // namespace detail

std::string_view to_string(EquivalenceKind kind) noexcept {
  switch (kind) {
    case EquivalenceKind::strong:
      return "strong";
    case EquivalenceKind::branching:
      return "branching";
    case EquivalenceKind::branching_div:
      return "branching-div";
    case EquivalenceKind::weak:
      return "weak";
  }
  return "?";
}

std::optional<EquivalenceKind> parse_equivalence(std::string_view text) noexcept {
  for (auto k : {EquivalenceKind::strong, EquivalenceKind::branching,
                 EquivalenceKind::branching_div, EquivalenceKind::weak}) {
    if (to_string(k) == text) return k;
  }
  if (text == "branching_div") return EquivalenceKind::branching_div;
  return std::nullopt;
}

Partition::Partition(const std::vector<std::uint32_t>& class_of) {
  block_of_.resize(class_of.size());
  // Class ids may be sparse; map them in order of first appearance.
  std::unordered_map<std::uint32_t, std::uint32_t> index;
  for (StateId s = 0; s < class_of.size(); ++s) {
    auto [it, inserted] = index.try_emplace(class_of[s], static_cast<std::uint32_t>(blocks_.size()));
    if (inserted) blocks_.emplace_back();
    block_of_[s] = it->second;
    blocks_[it->second].push_back(s);
  }
}

Partition Partition::discrete(std::size_t states) {
  std::vector<std::uint32_t> ids(states);
  for (std::size_t i = 0; i < states; ++i) ids[i] = static_cast<std::uint32_t>(i);
  return Partition(ids);
}

bool Partition::refines(const Partition& coarser) const {
  if (coarser.state_count() != state_count()) return false;
  for (const auto& b : blocks_) {
    for (StateId s : b) {
      if (coarser.block_of(s) != coarser.block_of(b.front())) return false;
    }
  }
  return true;
}

Partition strong_partition(const Lts& lts) {
  return Partition(detail::strong_refine(detail::graph_of(lts)));
}

Partition partition_of(const Lts& lts, EquivalenceKind kind) {
  switch (kind) {
    case EquivalenceKind::strong:
      return strong_partition(lts);
    case EquivalenceKind::branching:
      return branching_partition(lts);
    case EquivalenceKind::branching_div:
      return divergence_partition(lts);
    case EquivalenceKind::weak:
      return weak_partition(lts);
  }
  return branching_partition(lts);
}

std::set<std::pair<StateId, StateId>> naive_branching_relation(const Lts& lts, std::size_t bound) {
  const std::size_t n = lts.state_count();
  if (n > bound) {
    throw Error("naive branching relation: " + std::to_string(n) + " states exceed the bound of " +
                std::to_string(bound));
  }
  // reach[s][t]: s reaches t by zero or more internal steps.
  std::vector<std::vector<char>> reach(n, std::vector<char>(n, 0));
  for (StateId s = 0; s < n; ++s) {
    std::vector<StateId> stack{s};
    reach[s][s] = 1;
    while (!stack.empty()) {
      StateId u = stack.back();
      stack.pop_back();
      for (const auto& t : lts.out(u)) {
        if (t.label == kTau && !reach[s][t.dst]) {
          reach[s][t.dst] = 1;
          stack.push_back(t.dst);
        }
      }
    }
  }
  std::vector<std::vector<char>> rel(n, std::vector<char>(n, 1));

  // Every step of s1 is matched from s2 (one direction of the clauses).
  auto matched = [&](StateId s1, StateId s2) {
    for (const auto& step : lts.out(s1)) {
      if (step.label == kTau && rel[step.dst][s2]) continue;
      bool ok = false;
      for (StateId mid = 0; mid < n && !ok; ++mid) {
        if (!reach[s2][mid] || !rel[s1][mid]) continue;
        for (const auto& m : lts.out(mid)) {
          if (m.label == step.label && rel[step.dst][m.dst]) {
            ok = true;
            break;
          }
        }
      }
      if (!ok) return false;
    }
    return true;
  };

  bool changed = true;
  while (changed) {
    changed = false;
    for (StateId a = 0; a < n; ++a) {
      for (StateId b = 0; b < n; ++b) {
        if (rel[a][b] && (!matched(a, b) || !matched(b, a))) {
          rel[a][b] = rel[b][a] = 0;
          changed = true;
        }
      }
    }
  }
  std::set<std::pair<StateId, StateId>> out;
  for (StateId a = 0; a < n; ++a) {
    for (StateId b = 0; b < n; ++b) {
      if (rel[a][b]) out.emplace(a, b);
    }
  }
  return out;
}

Lts quotient(const Lts& lts, const Partition& p) {
  LtsBuilder b;
  b.ensure_states(p.block_count());
  std::vector<LabelId> label_map(lts.labels().size());
  for (LabelId l = 0; l < lts.labels().size(); ++l) label_map[l] = b.intern(lts.label(l));
  const auto& ts = lts.transitions();
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const auto& t = ts[i];
    std::uint32_t from = p.block_of(t.src), to = p.block_of(t.dst);
    if (t.label == kTau && from == to) continue;
    b.add(from, label_map[t.label], to, b.intern_note(lts.note(i)));
  }
  return std::move(b).build_unpruned(p.block_of(lts.initial()));
}

Lts disjoint_union(const Lts& a, const Lts& b) {
  LtsBuilder u;
  u.ensure_states(a.state_count() + b.state_count());
  auto copy = [&](const Lts& x, StateId offset) {
    std::vector<LabelId> label_map(x.labels().size());
    for (LabelId l = 0; l < x.labels().size(); ++l) label_map[l] = u.intern(x.label(l));
    const auto& ts = x.transitions();
    for (std::size_t i = 0; i < ts.size(); ++i) {
      u.add(ts[i].src + offset, label_map[ts[i].label], ts[i].dst + offset, u.intern_note(x.note(i)));
    }
  };
  copy(a, 0);
  copy(b, static_cast<StateId>(a.state_count()));
  return std::move(u).build_unpruned(a.initial());
}

}  // namespace linchk
