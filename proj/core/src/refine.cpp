// Trace inclusion, sequential histories and the brute-force linearizability
// oracle.

#include "linchk/refine.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "linchk/errors.hpp"
#include "linchk/explorer.hpp"

namespace linchk {

namespace {

/// Internal-step closure with a reusable visited stamp.
class Closure {
 public:
  explicit Closure(const Lts& lts) : lts_(lts), mark_(lts.state_count(), 0) {}

  std::vector<StateId> operator()(const std::vector<StateId>& from) {
    ++stamp_;
    std::vector<StateId> out;
    for (StateId s : from) {
      if (mark_[s] != stamp_) {
        mark_[s] = stamp_;
        out.push_back(s);
      }
    }
    for (std::size_t i = 0; i < out.size(); ++i) {
      for (const auto& t : lts_.out(out[i])) {
        if (t.label != kTau) break;
        if (mark_[t.dst] != stamp_) {
          mark_[t.dst] = stamp_;
          out.push_back(t.dst);
        }
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  const Lts& lts_;
  std::vector<std::uint32_t> mark_;
  std::uint32_t stamp_ = 0;
};

struct VectorHash {
  std::size_t operator()(const std::vector<StateId>& v) const noexcept {
    std::size_t h = v.size();
    for (StateId s : v) h = h * 1000003u ^ s;
    return h;
  }
};

}  // namespace

std::optional<std::uint32_t> Dfa::symbol(const std::string& text) const {
  auto it = std::lower_bound(alphabet.begin(), alphabet.end(), text);
  if (it == alphabet.end() || *it != text) return std::nullopt;
  return static_cast<std::uint32_t>(it - alphabet.begin());
}

bool Dfa::accepts(const Trace& trace) const {
  std::uint32_t q = 0;
  for (const auto& text : trace) {
    auto a = symbol(text);
    if (!a || next[q][*a] == kNone) return false;
    q = next[q][*a];
  }
  return true;
}

Dfa determinize(const Lts& lts, std::size_t max_subsets) {
  Dfa d;
  // Visible label ids are ordered by wire text, so symbol = id - 1.
  for (LabelId l = 1; l < lts.labels().size(); ++l) d.alphabet.push_back(lts.label(l).aut_text());
  const std::size_t symbols = d.alphabet.size();
  Closure closure(lts);
  std::unordered_map<std::vector<StateId>, std::uint32_t, VectorHash> index;
  auto intern = [&](std::vector<StateId> set) {
    auto it = index.find(set);
    if (it != index.end()) return it->second;
    if (d.subsets.size() >= max_subsets) {
      throw ResourceLimitError("subset ceiling of " + std::to_string(max_subsets) + " exceeded",
                               d.subsets.size());
    }
    auto id = static_cast<std::uint32_t>(d.subsets.size());
    index.emplace(set, id);
    d.subsets.push_back(std::move(set));
    d.next.emplace_back(symbols, Dfa::kNone);
    return id;
  };
  intern(closure({lts.initial()}));
  std::vector<std::vector<StateId>> targets(symbols);
  for (std::size_t q = 0; q < d.subsets.size(); ++q) {
    for (auto& t : targets) t.clear();
    for (StateId s : d.subsets[q]) {
      for (const auto& t : lts.out(s)) {
        if (t.label != kTau) targets[t.label - 1].push_back(t.dst);
      }
    }
    for (std::size_t a = 0; a < symbols; ++a) {
      if (targets[a].empty()) continue;
      auto id = intern(closure(targets[a]));
      d.next[q][a] = id;
    }
  }
  return d;
}

Verdict trace_included(const Lts& impl, const Lts& spec, std::size_t max_subsets) {
  Dfa d = determinize(spec, max_subsets);
  Verdict v;
  v.stats = {{"spec_subsets", d.state_count()}};
  // Impl label id -> spec symbol.
  std::vector<std::uint32_t> sym(impl.labels().size(), Dfa::kNone);
  for (LabelId l = 1; l < impl.labels().size(); ++l) {
    if (auto a = d.symbol(impl.label(l).aut_text())) sym[l] = *a;
  }

  struct Node {
    std::uint32_t parent;
    LabelId label;  // impl label id
  };
  std::vector<Node> trie{{0, kTau}};
  auto trace_of = [&](std::uint32_t node, LabelId last) {
    Trace t{impl.label(last).aut_text()};
    for (; node != 0; node = trie[node].parent) t.push_back(impl.label(trie[node].label).aut_text());
    std::reverse(t.begin(), t.end());
    return t;
  };

  std::unordered_set<std::uint64_t> visited;
  auto key = [](StateId s, std::uint32_t q) { return (static_cast<std::uint64_t>(s) << 32) | q; };
  struct Pair {
    StateId s;
    std::uint32_t q;
    std::uint32_t node;
  };
  std::vector<Pair> layer;
  auto close = [&](Pair seed, std::vector<Pair>& into) {
    std::size_t start = into.size();
    into.push_back(seed);
    for (std::size_t i = start; i < into.size(); ++i) {
      Pair p = into[i];
      for (const auto& t : impl.out(p.s)) {
        if (t.label != kTau) break;
        if (visited.insert(key(t.dst, p.q)).second) into.push_back({t.dst, p.q, p.node});
      }
    }
  };
  visited.insert(key(impl.initial(), 0));
  close({impl.initial(), 0, 0}, layer);

  std::size_t explored = 0;
  // Ranks of trie nodes within the current layer: nodes are created in
  // lexicographic order of their traces.
  std::unordered_map<std::uint32_t, std::uint32_t> rank{{0, 0}};
  while (!layer.empty()) {
    explored += layer.size();
    struct Cand {
      std::uint32_t rank;
      LabelId label;
      StateId s;
      std::uint32_t q;
      std::uint32_t parent;
    };
    std::vector<Cand> cands;
    std::optional<std::pair<std::uint32_t, LabelId>> fail;
    std::uint32_t fail_node = 0;
    for (const Pair& p : layer) {
      std::uint32_t r = rank.at(p.node);
      for (const auto& t : impl.out(p.s)) {
        if (t.label == kTau) continue;
        std::uint32_t a = sym[t.label];
        std::uint32_t q2 = a == Dfa::kNone ? Dfa::kNone : d.next[p.q][a];
        if (q2 == Dfa::kNone) {
          std::pair<std::uint32_t, LabelId> f{r, t.label};
          if (!fail || f < *fail) {
            fail = f;
            fail_node = p.node;
          }
          continue;
        }
        cands.push_back({r, t.label, t.dst, q2, p.node});
      }
    }
    if (fail) {
      v.pass = false;
      v.trace = trace_of(fail_node, fail->second);
      v.history = history_of(*v.trace);
      v.message = "trace not included in the specification";
      v.stats.push_back({"product_pairs", explored});
      return v;
    }
    std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
      return std::tie(a.rank, a.label, a.s, a.q) < std::tie(b.rank, b.label, b.s, b.q);
    });
    std::vector<Pair> next;
    std::unordered_map<std::uint32_t, std::uint32_t> next_rank;
    std::optional<std::pair<std::uint32_t, LabelId>> last;
    std::uint32_t node = 0;
    for (const Cand& c : cands) {
      if (!visited.insert(key(c.s, c.q)).second) continue;
      std::pair<std::uint32_t, LabelId> k{c.rank, c.label};
      if (!last || *last != k) {
        node = static_cast<std::uint32_t>(trie.size());
        trie.push_back({c.parent, c.label});
        next_rank[node] = static_cast<std::uint32_t>(next_rank.size());
        last = k;
      }
      close({c.s, c.q, node}, next);
    }
    layer = std::move(next);
    rank = std::move(next_rank);
  }
  v.pass = true;
  v.message = "trace inclusion holds";
  v.stats.push_back({"product_pairs", explored});
  return v;
}

namespace {

/// Methods and argument tuples the client uses, reconstructed from the
/// specification's rule signatures.
ObjectModel signature_model(const SequentialSpec& spec) {
  ObjectModel m;
  m.atoms = spec.atoms;
  for (const auto& r : spec.rules) {
    Method meth;
    meth.name = r.method;
    meth.params = r.params;
    meth.returns = r.returns;
    m.methods.push_back(std::move(meth));
  }
  return m;
}

std::string ret_text(const SequentialSpec& spec, const SequentialSpec::Rule& r, Value v) {
  return r.returns ? spec.value_text(*r.returns, v) : std::string(kVoid);
}

std::string args_text(const SequentialSpec& spec, const SequentialSpec::Rule& r,
                      const std::vector<Value>& args) {
  if (args.empty()) return std::string(kVoid);
  std::string s;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) s += ",";
    s += spec.value_text(*r.params[i].domain, args[i]);
  }
  return s;
}

std::optional<std::vector<Value>> parse_args(const SequentialSpec& spec,
                                             const SequentialSpec::Rule& r,
                                             const std::string& text) {
  std::vector<Value> out;
  if (r.params.empty()) {
    if (text != kVoid) return std::nullopt;
    return out;
  }
  std::size_t start = 0;
  for (std::size_t i = 0; i < r.params.size(); ++i) {
    std::size_t end = i + 1 == r.params.size() ? text.size() : text.find(',', start);
    if (end == std::string::npos) return std::nullopt;
    auto v = spec.parse_value(*r.params[i].domain, std::string_view(text).substr(start, end - start));
    if (!v) return std::nullopt;
    out.push_back(*v);
    start = end + 1;
  }
  return out;
}

}  // namespace

std::vector<History> legal_sequential_histories(const SequentialSpec& spec,
                                                const ClientConfig& config, std::size_t depth) {
  ObjectModel sig = signature_model(spec);
  CallTable calls(sig, config);
  std::vector<History> out;
  History h;
  std::vector<int> done(calls.threads(), 0);
  std::function<void(const std::vector<Value>&)> grow = [&](const std::vector<Value>& state) {
    out.push_back(h);
    if (h.size() / 2 >= depth) return;
    for (int t = 1; t <= calls.threads(); ++t) {
      if (done[t - 1] >= calls.ops(t)) continue;
      for (const auto& [mi, tuples] : calls.choices(t, done[t - 1])) {
        const auto& rule = spec.rules[mi];
        for (const auto& args : tuples) {
          auto step = spec.step(state, mi, args);
          h.push_back(Event::call(t, rule.method, args_text(spec, rule, args)));
          h.push_back(Event::ret(t, rule.method, ret_text(spec, rule, step.ret)));
          ++done[t - 1];
          grow(step.state);
          --done[t - 1];
          h.pop_back();
          h.pop_back();
        }
      }
    }
  };
  grow(spec.initial());
  return out;
}

std::optional<History> linearization_witness(const History& h, const SequentialSpec& spec) {
  auto ops = operations(h);
  if (ops.size() > 63) throw Error("history has too many operations for the oracle");
  struct Op {
    int rule;
    std::vector<Value> args;
  };
  std::vector<Op> parsed;
  for (const auto& o : ops) {
    int r = spec.rule_index(o.method);
    if (r < 0) return std::nullopt;
    auto args = parse_args(spec, spec.rules[r], o.arg);
    if (!args) return std::nullopt;
    parsed.push_back({r, std::move(*args)});
  }
  std::uint64_t must = 0;
  for (std::size_t i = 0; i < ops.size(); ++i) {
    if (!ops[i].pending()) must |= std::uint64_t{1} << i;
  }
  std::set<std::pair<std::uint64_t, std::vector<Value>>> failed;
  std::vector<std::pair<std::size_t, Value>> order;

  std::function<bool(std::uint64_t, const std::vector<Value>&)> search =
      [&](std::uint64_t done, const std::vector<Value>& state) {
        if ((done & must) == must) return true;
        if (failed.count({done, state})) return false;
        for (std::size_t i = 0; i < ops.size(); ++i) {
          if (done >> i & 1) continue;
          // Every operation that returned before this call must come first.
          bool minimal = true;
          for (std::size_t j = 0; j < ops.size() && minimal; ++j) {
            if (!(done >> j & 1) && precedes(ops[j], ops[i])) minimal = false;
          }
          if (!minimal) continue;
          auto step = spec.step(state, parsed[i].rule, parsed[i].args);
          if (!ops[i].pending() &&
              ret_text(spec, spec.rules[parsed[i].rule], step.ret) != ops[i].retval) {
            continue;
          }
          order.emplace_back(i, step.ret);
          if (search(done | std::uint64_t{1} << i, step.state)) return true;
          order.pop_back();
        }
        failed.insert({done, state});
        return false;
      };
  if (!search(0, spec.initial())) return std::nullopt;
  History s;
  for (auto [i, ret] : order) {
    const auto& rule = spec.rules[parsed[i].rule];
    s.push_back(Event::call(ops[i].thread, ops[i].method, ops[i].arg));
    s.push_back(Event::ret(ops[i].thread, ops[i].method, ret_text(spec, rule, ret)));
  }
  return s;
}

namespace {

/// complete(H') for the extension H' of h that returns the pending calls
/// placed in s, with the values s gives them.
History completed_extension(const History& h, const History& s) {
  History ext = h;
  for (const auto& o : operations(h)) {
    if (!o.pending()) continue;
    // The pending call is the thread's last operation; it was placed in s
    // iff s holds as many operations of that thread as h does.
    std::size_t in_h = 0, in_s = 0;
    for (const auto& e : h) in_h += e.is_call() && e.thread == o.thread;
    const Event* last = nullptr;
    for (std::size_t i = 0; i + 1 < s.size(); i += 2) {
      if (s[i].thread == o.thread) {
        ++in_s;
        last = &s[i + 1];
      }
    }
    if (in_s == in_h && last) ext.push_back(*last);
  }
  return complete(ext);
}

}  // namespace

Verdict brute_force_linearizable(const Lts& lts, const SequentialSpec& spec,
                                 const BruteForceOptions& options) {
  if (lts.state_count() > options.max_states) {
    throw ResourceLimitError("brute-force oracle: " + std::to_string(lts.state_count()) +
                                 " states exceed the bound of " + std::to_string(options.max_states),
                             0);
  }
  for (LabelId l = 1; l < lts.labels().size(); ++l) {
    if (!event_of(lts.label(l))) throw Error("label is not a call or return event");
  }
  Verdict v;
  Closure closure(lts);
  std::size_t histories = 0;
  Trace trace;
  std::optional<Trace> failing;

  auto check = [&](const Trace& t) -> bool {
    History h = history_of(t);
    auto s = linearization_witness(h, spec);
    if (!s) return false;
    // The witness must satisfy the three clauses on its own.
    if (!lin_relation(completed_extension(h, *s), *s)) {
      throw Error("internal error: linearization witness fails the clause check");
    }
    return true;
  };

  std::function<void(const std::vector<StateId>&)> walk = [&](const std::vector<StateId>& set) {
    if (failing) return;
    std::map<LabelId, std::vector<StateId>> next;
    for (StateId s : set) {
      for (const auto& t : lts.out(s)) {
        if (t.label != kTau) next[t.label].push_back(t.dst);
      }
    }
    if (next.empty()) {
      if (++histories > options.max_histories) {
        throw ResourceLimitError("brute-force oracle: history ceiling exceeded", histories);
      }
      if (!check(trace)) failing = trace;
      return;
    }
    for (auto& [label, targets] : next) {
      trace.push_back(lts.label(label).aut_text());
      walk(closure(targets));
      trace.pop_back();
      if (failing) return;
    }
  };
  walk(closure({lts.initial()}));
  v.stats = {{"histories", histories}};
  if (!failing) {
    v.pass = true;
    v.message = "every history is linearizable";
    return v;
  }
  // Shortest failing prefix; linearizable histories are prefix-closed.
  Trace prefix;
  for (const auto& text : *failing) {
    prefix.push_back(text);
    if (!check(prefix)) break;
  }
  v.pass = false;
  v.trace = prefix;
  v.history = history_of(prefix);
  v.message = "history without linearization";
  return v;
}

Verdict check_linearizability(const ObjectModel& model, const ClientConfig& config,
                              const LinOptions& options) {
  Lts impl = explore(model, config);
  Lts spec = explore_spec(model, config);
  Lts qi = impl, qs = spec;
  if (options.quotient) {
    qi = quotient(impl, partition_of(impl, *options.quotient));
    qs = quotient(spec, partition_of(spec, *options.quotient));
  }
  Verdict v = trace_included(qi, qs, options.max_subsets);
  std::vector<std::pair<std::string, std::size_t>> stats = {
      {"impl_states", impl.state_count()},
      {"impl_transitions", impl.transition_count()},
      {"impl_quotient_states", qi.state_count()},
      {"impl_quotient_transitions", qi.transition_count()},
      {"spec_states", spec.state_count()},
      {"spec_transitions", spec.transition_count()},
      {"spec_quotient_states", qs.state_count()},
      {"spec_quotient_transitions", qs.transition_count()}};
  stats.insert(stats.end(), v.stats.begin(), v.stats.end());
  v.stats = std::move(stats);
  v.message = v.pass ? "linearizable" : "not linearizable";
  return v;
}

}  // namespace linchk
