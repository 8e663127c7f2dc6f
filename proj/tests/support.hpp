// Shared helpers for the test programs: fixture paths, seeded random LTSs and
// a direct check of the branching bisimulation clauses.
#pragma once

#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "linchk/bisim.hpp"
#include "linchk/history.hpp"
#include "linchk/lts.hpp"
#include "linchk/verdict.hpp"

namespace linchk::test {

inline std::string fixture(const std::string& name) { return std::string(LINCHK_FIXTURES_DIR) + "/" + name; }
inline std::string model_path(const std::string& name) { return std::string(LINCHK_MODELS_DIR) + "/" + name; }

struct RandomLtsParams {
  std::size_t max_states = 30;
  int max_labels = 4;
  double tau_density = 0.3;
};

/// Unpruned, so the state count is exactly what was drawn.
inline Lts random_lts(std::mt19937_64& rng, const RandomLtsParams& p) {
  std::uniform_int_distribution<std::size_t> nstates(1, p.max_states);
  std::size_t n = nstates(rng);
  std::uniform_int_distribution<int> nlabels(1, p.max_labels);
  int labels = nlabels(rng);
  std::uniform_int_distribution<std::size_t> edges_per_state(0, 3);
  std::uniform_int_distribution<std::size_t> state(0, n - 1);
  std::uniform_int_distribution<int> label(0, labels - 1);
  std::bernoulli_distribution tau(p.tau_density);

  LtsBuilder b;
  b.ensure_states(n);
  std::vector<LabelId> ids;
  for (int i = 0; i < labels; ++i) {
    ids.push_back(b.intern(ActionLabel::call(1, "m" + std::to_string(i), "VOID")));
  }
  for (std::size_t s = 0; s < n; ++s) {
    std::size_t k = edges_per_state(rng);
    for (std::size_t e = 0; e < k; ++e) {
      LabelId l = tau(rng) ? kTau : ids[static_cast<std::size_t>(label(rng))];
      b.add(static_cast<StateId>(s), l, static_cast<StateId>(state(rng)));
    }
  }
  return std::move(b).build_unpruned(0);
}

inline std::set<std::pair<StateId, StateId>> relation_of(const Partition& p) {
  std::set<std::pair<StateId, StateId>> r;
  for (const auto& block : p.blocks()) {
    for (StateId a : block) {
      for (StateId b : block) r.emplace(a, b);
    }
  }
  return r;
}

/// tau* successors of s, including s.
inline std::vector<StateId> tau_reach(const Lts& lts, StateId s) { return tau_closure(lts, {s}); }

/// Every same-block pair satisfies the transfer condition: a step s -a-> s'
/// is either inert (a = tau, s' in the block of t) or matched by
/// t =tau*=> t'' -a-> t' with t'' ~ s and t' ~ s'.
inline bool is_branching_bisimulation(const Lts& lts, const Partition& p) {
  for (StateId s = 0; s < lts.state_count(); ++s) {
    for (StateId t : p.block(p.block_of(s))) {
      std::vector<StateId> reach = tau_reach(lts, t);
      for (const Transition& tr : lts.out(s)) {
        if (tr.label == kTau && p.same_block(tr.dst, t)) continue;
        bool matched = false;
        for (StateId mid : reach) {
          if (!p.same_block(mid, s)) continue;
          for (const Transition& u : lts.out(mid)) {
            if (u.label == tr.label && p.same_block(u.dst, tr.dst)) {
              matched = true;
              break;
            }
          }
          if (matched) break;
        }
        if (!matched) return false;
      }
    }
  }
  return true;
}

/// Strong variant: every step matched by a single step with the same label.
inline bool is_strong_bisimulation(const Lts& lts, const Partition& p) {
  for (StateId s = 0; s < lts.state_count(); ++s) {
    for (StateId t : p.block(p.block_of(s))) {
      for (const Transition& tr : lts.out(s)) {
        bool matched = false;
        for (const Transition& u : lts.out(t)) {
          if (u.label == tr.label && p.same_block(u.dst, tr.dst)) {
            matched = true;
            break;
          }
        }
        if (!matched) return false;
      }
    }
  }
  return true;
}

/// Empty when every step of the lasso is a transition of lts, the prefix starts
/// at the initial state, stem and cycle are internal, the cycle closes, and
/// stem and cycle stay in one block of p. Otherwise a description of the fault.
inline std::string replay_lasso(const Lts& lts, const Lasso& lasso, const Partition& p) {
  auto has_step = [&](const PathStep& st) {
    if (st.src >= lts.state_count()) return false;
    for (const Transition& t : lts.out(st.src)) {
      if (t.dst == st.dst && lts.label(t.label).aut_text() == st.label) return true;
    }
    return false;
  };
  StateId at = lts.initial();
  for (const auto& st : lasso.prefix) {
    if (st.src != at || !has_step(st)) return "prefix breaks at " + std::to_string(st.src);
    at = st.dst;
  }
  StateId anchor = at;
  for (const auto* part : {&lasso.stem, &lasso.cycle}) {
    for (const auto& st : *part) {
      if (st.src != at || !has_step(st)) return "step missing at " + std::to_string(st.src);
      if (st.label != "i") return "visible step " + st.label;
      if (!p.same_block(st.dst, anchor)) return "leaves the block at " + std::to_string(st.dst);
      at = st.dst;
    }
  }
  if (lasso.cycle.empty()) return "empty cycle";
  if (at != lasso.cycle.front().src) return "cycle does not close";
  return {};
}

/// Wire labels of a history's events.
inline Trace trace_of(const History& h) {
  Trace t;
  for (const auto& e : h) {
    t.push_back((e.is_call() ? ActionLabel::call(e.thread, e.method, e.value)
                             : ActionLabel::ret(e.thread, e.method, e.value))
                    .aut_text());
  }
  return t;
}

inline ActionLabel call_label(const std::string& m) { return ActionLabel::call(1, m, "VOID"); }

}  // namespace linchk::test
