// Internal helpers shared by the equivalence engines.

#pragma once

#include <cstdint>
#include <vector>

#include "linchk/lts.hpp"

namespace linchk::detail {

/// Edge list over states 0..n-1 with label ids below label_count.
struct Graph {
  std::size_t n = 0;
  std::uint32_t label_count = 1;
  std::vector<Transition> edges;
};

Graph graph_of(const Lts& lts);

/// Coarsest strong bisimulation; returns a class id per state.
std::vector<std::uint32_t> strong_refine(const Graph& g);

/// Strongly connected components of the subgraph selected by `keep`.
/// Components are numbered in reverse topological order (sinks first).
struct Sccs {
  std::vector<std::uint32_t> of;
  std::uint32_t count = 0;
};

template <class Keep>
Sccs tarjan(std::size_t n, const std::vector<Transition>& sorted_edges,
            const std::vector<std::size_t>& offsets, Keep keep);

/// CSR offsets of edges sorted by source.
std::vector<std::size_t> offsets_of(std::size_t n, const std::vector<Transition>& sorted_edges);

// ---- implementation of the template

template <class Keep>
Sccs tarjan(std::size_t n, const std::vector<Transition>& edges,
            const std::vector<std::size_t>& offsets, Keep keep) {
  constexpr std::uint32_t kUnvisited = static_cast<std::uint32_t>(-1);
  Sccs out;
  out.of.assign(n, kUnvisited);
  std::vector<std::uint32_t> index(n, kUnvisited), low(n, 0);
  std::vector<char> on_stack(n, 0);
  std::vector<StateId> stack;
  struct Frame {
    StateId v;
    std::size_t next;
  };
  std::vector<Frame> call;
  std::uint32_t counter = 0;
  for (StateId root = 0; root < n; ++root) {
    if (index[root] != kUnvisited) continue;
    call.push_back({root, offsets[root]});
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!call.empty()) {
      Frame& f = call.back();
      StateId v = f.v;
      bool descended = false;
      while (f.next < offsets[v + 1]) {
        const Transition& t = edges[f.next++];
        if (!keep(t)) continue;
        StateId w = t.dst;
        if (index[w] == kUnvisited) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          call.push_back({w, offsets[w]});
          descended = true;
          break;
        }
        if (on_stack[w]) low[v] = std::min(low[v], index[w]);
      }
      if (descended) continue;
      if (low[v] == index[v]) {
        StateId w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          out.of[w] = out.count;
        } while (w != v);
        ++out.count;
      }
      call.pop_back();
      if (!call.empty()) {
        StateId u = call.back().v;
        low[u] = std::min(low[u], low[v]);
      }
    }
  }
  return out;
}

}  // namespace linchk::detail
