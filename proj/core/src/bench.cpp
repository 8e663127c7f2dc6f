#include "linchk/bench.hpp"

#include <chrono>
#include <cstdio>

#include "linchk/bisim.hpp"
#include "linchk/errors.hpp"
#include "linchk/explorer.hpp"
#include "linchk/progress.hpp"
#include "linchk/refine.hpp"

namespace linchk {

namespace detail {
extern const std::pair<std::string_view, std::string_view> kModelSources[];
extern const int kModelSourceCount;
}  // namespace detail

std::string_view to_string(Expectation e) noexcept {
  switch (e) {
    case Expectation::pass:
      return "pass";
    case Expectation::fail:
      return "fail";
    case Expectation::not_applicable:
      return "n/a";
  }
  return "?";
}

namespace {

ClientConfig config(int threads, int ops, int values = 0) {
  ClientConfig c;
  c.threads = threads;
  c.max_ops_per_thread = ops;
  c.values = values;
  return c;
}

}  // namespace

const std::vector<Benchmark>& list_benchmarks() {
  using E = Expectation;
  static const std::vector<Benchmark> registry = {
      {"treiber_stack", "treiber.obj", "stack", E::pass, E::pass, config(2, 2)},
      {"ms_queue", "ms_queue.obj", "queue", E::pass, E::pass, config(2, 2)},
      {"coarse_list", "coarse_list.obj", "set", E::pass, E::not_applicable, config(2, 2, 2)},
      {"ms_two_lock_queue", "ms_two_lock_queue.obj", "queue", E::pass, E::fail, config(2, 2)},
      {"hw_queue", "hw_queue.obj", "queue", E::pass, E::not_applicable, config(2, 2)},
      // At two operations per thread a lost Enq only leaves a Deq pending.
      {"buggy_hw_queue", "buggy_hw_queue.obj", "queue", E::fail, E::not_applicable, config(2, 3)},
      {"spinlock_queue", "spinlock_queue.obj", "queue", E::not_applicable, E::fail, config(2, 2)},
  };
  return registry;
}

const Benchmark* find_benchmark(std::string_view name) {
  for (const auto& b : list_benchmarks()) {
    if (b.name == name) return &b;
  }
  return nullptr;
}

std::optional<std::string_view> model_source(std::string_view file) {
  for (int i = 0; i < detail::kModelSourceCount; ++i) {
    if (detail::kModelSources[i].first == file) return detail::kModelSources[i].second;
  }
  return std::nullopt;
}

ObjectModel load_benchmark_model(const Benchmark& b, const ClientConfig& config) {
  auto text = model_source(b.file);
  if (!text) throw Error("model source " + b.file + " is not embedded");
  return parse_model(*text, {{"THREADS", config.threads}, {"OPS", config.max_ops_per_thread}});
}

ClientConfig effective_config(const Benchmark& b, const BenchOverrides& o) {
  ClientConfig c = b.config;
  if (o.threads) c.threads = *o.threads;
  if (o.ops) c.max_ops_per_thread = *o.ops;
  if (o.values) c.values = *o.values;
  if (o.max_states) c.max_states = *o.max_states;
  return c;
}

bool BenchRecord::matches() const noexcept {
  return expected == Expectation::not_applicable || pass == (expected == Expectation::pass);
}

double BenchRecord::reduction() const noexcept {
  return quotient_states ? static_cast<double>(states) / static_cast<double>(quotient_states) : 0.0;
}

std::vector<BenchRecord> run_benchmark(std::string_view name, const BenchOverrides& overrides) {
  const Benchmark* b = find_benchmark(name);
  if (!b) throw Error("unknown benchmark " + std::string(name));
  ClientConfig cfg = effective_config(*b, overrides);
  ObjectModel model = load_benchmark_model(*b, cfg);
  std::vector<BenchRecord> out;
  using Clock = std::chrono::steady_clock;

  auto base = [&](const char* check, Expectation e) {
    BenchRecord r;
    r.benchmark = b->name;
    r.check = check;
    r.threads = cfg.threads;
    r.ops = cfg.max_ops_per_thread;
    r.expected = e;
    return r;
  };

  if (b->linearizable != Expectation::not_applicable) {
    auto start = Clock::now();
    Verdict v = check_linearizability(model, cfg);
    BenchRecord r = base("lin", b->linearizable);
    r.pass = v.pass;
    r.states = v.stat("impl_states");
    r.transitions = v.stat("impl_transitions");
    r.quotient_states = v.stat("impl_quotient_states");
    r.quotient_transitions = v.stat("impl_quotient_transitions");
    r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    out.push_back(r);
  }
  if (b->lock_free != Expectation::not_applicable) {
    auto start = Clock::now();
    ProgressCheckRequest req{model, std::nullopt, cfg};
    Verdict v = check_lockfree(req);
    BenchRecord r = base("lockfree", b->lock_free);
    r.pass = v.pass;
    r.states = v.stat("concrete_states");
    r.transitions = v.stat("concrete_transitions");
    // Size of the concrete side of the divergence-sensitive quotient.
    Lts conc = explore(model, cfg);
    Lts q = quotient(conc, divergence_partition(conc));
    r.quotient_states = q.state_count();
    r.quotient_transitions = q.transition_count();
    r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    out.push_back(r);
  }
  return out;
}

std::string format_record(const BenchRecord& r, bool with_time) {
  char factor[32];
  std::snprintf(factor, sizeof factor, "%.2f", r.reduction());
  std::string s = "benchmark=" + r.benchmark + " check=" + r.check +
                  " threads=" + std::to_string(r.threads) + " ops=" + std::to_string(r.ops) +
                  " verdict=" + (r.pass ? "pass" : "fail") +
                  " expected=" + std::string(to_string(r.expected)) +
                  " match=" + (r.matches() ? "yes" : "no") + " states=" + std::to_string(r.states) +
                  " transitions=" + std::to_string(r.transitions) +
                  " quotient_states=" + std::to_string(r.quotient_states) +
                  " quotient_transitions=" + std::to_string(r.quotient_transitions) +
                  " factor=" + factor;
  if (with_time) {
    char t[32];
    std::snprintf(t, sizeof t, "%.3f", r.seconds);
    s += std::string(" seconds=") + t;
  }
  return s;
}

}  // namespace linchk
