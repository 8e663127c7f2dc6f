// Branching, divergence-sensitive branching and weak bisimulation.
//
// Internal cycles are collapsed first; the refinement loop then works on an
// LTS whose internal steps form a DAG, so the states able to reach a splitter
// by inert steps are found with a backward search.

#include <algorithm>
#include <tuple>

#include "graph.hpp"
#include "linchk/bisim.hpp"

namespace linchk {

namespace {

struct Collapsed {
  std::size_t n = 0;
  std::uint32_t label_count = 1;
  std::vector<std::uint32_t> node_of;
  std::vector<char> cyclic;
  std::vector<Transition> edges;  // by (src, label, dst); internal edges go to smaller ids
  std::vector<std::size_t> out_off;
  std::vector<Transition> in;  // by (dst, label, src)
  std::vector<std::size_t> in_off;
};

Collapsed collapse(const Lts& lts) {
  const auto& ts = lts.transitions();
  auto off = detail::offsets_of(lts.state_count(), ts);
  auto scc = detail::tarjan(lts.state_count(), ts, off,
                            [](const Transition& t) { return t.label == kTau; });
  Collapsed c;
  c.n = scc.count;
  c.label_count = static_cast<std::uint32_t>(lts.labels().size());
  c.node_of = std::move(scc.of);
  c.cyclic.assign(c.n, 0);
  std::vector<std::uint32_t> size(c.n, 0);
  for (auto v : c.node_of) ++size[v];
  for (std::uint32_t v = 0; v < c.n; ++v) c.cyclic[v] = size[v] > 1;
  c.edges.reserve(ts.size());
  for (const auto& t : ts) {
    std::uint32_t a = c.node_of[t.src], b = c.node_of[t.dst];
    if (t.label == kTau && a == b) {
      c.cyclic[a] = 1;
      continue;
    }
    c.edges.push_back({a, t.label, b});
  }
  std::sort(c.edges.begin(), c.edges.end(), [](const Transition& x, const Transition& y) {
    return std::tie(x.src, x.label, x.dst) < std::tie(y.src, y.label, y.dst);
  });
  c.edges.erase(std::unique(c.edges.begin(), c.edges.end()), c.edges.end());
  c.out_off = detail::offsets_of(c.n, c.edges);
  c.in = c.edges;
  std::sort(c.in.begin(), c.in.end(), [](const Transition& x, const Transition& y) {
    return std::tie(x.dst, x.label, x.src) < std::tie(y.dst, y.label, y.src);
  });
  c.in_off.assign(c.n + 1, 0);
  for (const auto& t : c.in) ++c.in_off[t.dst + 1];
  for (std::size_t i = 0; i < c.n; ++i) c.in_off[i + 1] += c.in_off[i];
  return c;
}

struct Blocks {
  std::vector<std::uint32_t> of;
  std::vector<std::vector<std::uint32_t>> members;

  explicit Blocks(std::size_t n) : of(n, 0), members(n ? 1 : 0) {
    for (std::uint32_t v = 0; v < n; ++v) members[0].push_back(v);
  }

  /// Moves the marked members of block b into a new block. Returns false if
  /// all or none of them are marked.
  template <class Marked>
  bool split(std::uint32_t b, Marked marked) {
    std::vector<std::uint32_t> in, out;
    for (auto v : members[b]) (marked(v) ? in : out).push_back(v);
    if (in.empty() || out.empty()) return false;
    auto fresh = static_cast<std::uint32_t>(members.size());
    for (auto v : in) of[v] = fresh;
    members[b] = std::move(out);
    members.push_back(std::move(in));
    return true;
  }
};

/// Refines until stable under every (label, block) splitter.
void refine_branching(const Collapsed& c, Blocks& p) {
  std::vector<std::uint32_t> mark(c.n, 0);
  std::uint32_t stamp = 0;
  std::vector<std::pair<LabelId, std::uint32_t>> pre;
  std::vector<std::uint32_t> marked, work, touched;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t b = 0; b < p.members.size(); ++b) {
      pre.clear();
      for (auto t : p.members[b]) {
        for (std::size_t i = c.in_off[t]; i < c.in_off[t + 1]; ++i) {
          const auto& e = c.in[i];
          if (e.label == kTau && p.of[e.src] == p.of[e.dst]) continue;
          pre.emplace_back(e.label, e.src);
        }
      }
      std::sort(pre.begin(), pre.end());
      pre.erase(std::unique(pre.begin(), pre.end()), pre.end());
      for (std::size_t i = 0; i < pre.size();) {
        ++stamp;
        marked.clear();
        work.clear();
        std::size_t j = i;
        for (; j < pre.size() && pre[j].first == pre[i].first; ++j) {
          auto s = pre[j].second;
          if (mark[s] != stamp) {
            mark[s] = stamp;
            marked.push_back(s);
            work.push_back(s);
          }
        }
        i = j;
        // Backward closure over inert internal steps.
        while (!work.empty()) {
          auto s = work.back();
          work.pop_back();
          for (std::size_t k = c.in_off[s]; k < c.in_off[s + 1] && c.in[k].label == kTau; ++k) {
            auto u = c.in[k].src;
            if (mark[u] != stamp && p.of[u] == p.of[s]) {
              mark[u] = stamp;
              marked.push_back(u);
              work.push_back(u);
            }
          }
        }
        touched.clear();
        for (auto s : marked) touched.push_back(p.of[s]);
        std::sort(touched.begin(), touched.end());
        touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
        for (auto blk : touched) {
          if (p.split(blk, [&](std::uint32_t v) { return mark[v] == stamp; })) changed = true;
        }
      }
    }
  }
}

/// Nodes that reach an internal cycle inside their block.
std::vector<char> node_divergence(const Collapsed& c, const Blocks& p) {
  std::vector<char> div(c.n, 0);
  for (std::uint32_t v = 0; v < c.n; ++v) {  // successors by internal steps have smaller ids
    if (c.cyclic[v]) {
      div[v] = 1;
      continue;
    }
    for (std::size_t i = c.out_off[v]; i < c.out_off[v + 1] && c.edges[i].label == kTau; ++i) {
      auto w = c.edges[i].dst;
      if (div[w] && p.of[w] == p.of[v]) {
        div[v] = 1;
        break;
      }
    }
  }
  return div;
}

Partition expand(const Collapsed& c, const std::vector<std::uint32_t>& class_of_node) {
  std::vector<std::uint32_t> ids(c.node_of.size());
  for (std::size_t s = 0; s < ids.size(); ++s) ids[s] = class_of_node[c.node_of[s]];
  return Partition(ids);
}

/// Weak bisimulation classes of the collapsed nodes via saturation. Returns
/// nullopt when the saturated system would exceed `budget` transitions.
std::optional<std::vector<std::uint32_t>> weak_classes(const Collapsed& c, std::size_t budget) {
  std::vector<std::vector<std::uint32_t>> closure(c.n);
  std::size_t total = 0;
  for (std::uint32_t v = 0; v < c.n; ++v) {
    auto& cl = closure[v];
    cl.push_back(v);
    for (std::size_t i = c.out_off[v]; i < c.out_off[v + 1] && c.edges[i].label == kTau; ++i) {
      const auto& sub = closure[c.edges[i].dst];
      cl.insert(cl.end(), sub.begin(), sub.end());
    }
    std::sort(cl.begin(), cl.end());
    cl.erase(std::unique(cl.begin(), cl.end()), cl.end());
    total += cl.size();
    if (total > budget) return std::nullopt;
  }
  detail::Graph g;
  g.n = c.n;
  g.label_count = c.label_count;
  std::vector<Transition> local;
  for (std::uint32_t v = 0; v < c.n; ++v) {
    local.clear();
    for (auto w : closure[v]) local.push_back({v, kTau, w});
    for (auto u : closure[v]) {
      for (std::size_t i = c.out_off[u]; i < c.out_off[u + 1]; ++i) {
        const auto& e = c.edges[i];
        if (e.label == kTau) continue;
        for (auto y : closure[e.dst]) local.push_back({v, e.label, y});
      }
    }
    std::sort(local.begin(), local.end(), [](const Transition& x, const Transition& y) {
      return std::tie(x.label, x.dst) < std::tie(y.label, y.dst);
    });
    local.erase(std::unique(local.begin(), local.end()), local.end());
    g.edges.insert(g.edges.end(), local.begin(), local.end());
    if (g.edges.size() > budget) return std::nullopt;
  }
  return detail::strong_refine(g);
}

constexpr std::size_t kSaturationBudget = 30'000'000;

}  // namespace

Partition branching_partition(const Lts& lts) {
  Collapsed c = collapse(lts);
  Blocks p(c.n);
  refine_branching(c, p);
  return expand(c, p.of);
}

Partition divergence_partition(const Lts& lts) {
  Collapsed c = collapse(lts);
  Blocks p(c.n);
  refine_branching(c, p);
  while (true) {
    auto div = node_divergence(c, p);
    bool split = false;
    for (std::uint32_t b = 0, count = static_cast<std::uint32_t>(p.members.size()); b < count; ++b) {
      if (p.split(b, [&](std::uint32_t v) { return div[v] != 0; })) split = true;
    }
    if (!split) break;
    refine_branching(c, p);
  }
  return expand(c, p.of);
}

Partition weak_partition(const Lts& lts) {
  Collapsed c = collapse(lts);
  if (auto classes = weak_classes(c, kSaturationBudget)) return expand(c, *classes);
  // Branching bisimilar states are weakly bisimilar, so the weak classes of
  // the branching quotient determine those of the original.
  Partition br = branching_partition(lts);
  Lts q = quotient(lts, br);
  Collapsed cq = collapse(q);
  auto classes = weak_classes(cq, static_cast<std::size_t>(-1));
  std::vector<std::uint32_t> ids(lts.state_count());
  for (StateId s = 0; s < ids.size(); ++s) ids[s] = (*classes)[cq.node_of[br.block_of(s)]];
  return Partition(ids);
}

std::vector<char> divergence_flags(const Lts& lts, const Partition& p) {
  const auto& ts = lts.transitions();
  const std::size_t n = lts.state_count();
  auto off = detail::offsets_of(n, ts);
  auto inert = [&](const Transition& t) {
    return t.label == kTau && p.block_of(t.src) == p.block_of(t.dst);
  };
  auto scc = detail::tarjan(n, ts, off, inert);
  std::vector<std::uint32_t> size(scc.count, 0);
  for (auto v : scc.of) ++size[v];
  std::vector<std::vector<StateId>> members(scc.count);
  for (StateId s = 0; s < n; ++s) members[scc.of[s]].push_back(s);
  std::vector<char> div(scc.count, 0);
  for (std::uint32_t k = 0; k < scc.count; ++k) {
    div[k] = size[k] > 1;
    for (StateId s : members[k]) {
      for (std::size_t i = off[s]; i < off[s + 1] && !div[k]; ++i) {
        const auto& t = ts[i];
        if (!inert(t)) continue;
        if (t.dst == s || div[scc.of[t.dst]]) div[k] = 1;
      }
    }
  }
  std::vector<char> out(n);
  for (StateId s = 0; s < n; ++s) out[s] = div[scc.of[s]];
  return out;
}

}  // namespace linchk
