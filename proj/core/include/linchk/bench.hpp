#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "linchk/client.hpp"
#include "linchk/modelir.hpp"

namespace linchk {

enum class Expectation : std::uint8_t { pass, fail, not_applicable };

std::string_view to_string(Expectation e) noexcept;

struct Benchmark {
  std::string name;
  std::string file;       // model source, embedded at build time
  std::string spec_kind;  // "queue", "stack" or "set"
  Expectation linearizable = Expectation::pass;
  Expectation lock_free = Expectation::not_applicable;
  ClientConfig config;
};

const std::vector<Benchmark>& list_benchmarks();
const Benchmark* find_benchmark(std::string_view name);

/// Embedded source text of a model file such as "hw_queue.obj".
std::optional<std::string_view> model_source(std::string_view file);

/// Parses the benchmark's model with THREADS and OPS set from `config`.
ObjectModel load_benchmark_model(const Benchmark& b, const ClientConfig& config);

struct BenchOverrides {
  std::optional<int> threads;
  std::optional<int> ops;
  std::optional<int> values;
  std::optional<std::size_t> max_states;
};

/// Configuration a run uses: the benchmark default with overrides applied.
ClientConfig effective_config(const Benchmark& b, const BenchOverrides& overrides);

/// One executed check.
struct BenchRecord {
  std::string benchmark;
  std::string check;  // "lin" or "lockfree"
  int threads = 0;
  int ops = 0;
  bool pass = false;
  Expectation expected = Expectation::not_applicable;
  std::size_t states = 0;
  std::size_t transitions = 0;
  std::size_t quotient_states = 0;
  std::size_t quotient_transitions = 0;
  double seconds = 0;

  bool matches() const noexcept;
  double reduction() const noexcept;
};

/// Runs every check with an expectation. Throws Error for an unknown name.
std::vector<BenchRecord> run_benchmark(std::string_view name, const BenchOverrides& overrides = {});

/// Space separated key=value pairs; wall time only when asked for.
std::string format_record(const BenchRecord& r, bool with_time = false);

}  // namespace linchk
