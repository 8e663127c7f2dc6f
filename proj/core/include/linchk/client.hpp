#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "linchk/modelir.hpp"

namespace linchk {

struct ScenarioCall {
  std::string method;
  std::vector<std::string> args;  // value texts, one per parameter
};

/// Bounded most-general client.
struct ClientConfig {
  int threads = 2;
  int max_ops_per_thread = 2;

  /// 0: every call slot (thread, op index) gets its own argument value.
  /// n > 0: each parameter ranges over the first n values of its domain.
  int values = 0;

  /// Explicit argument tuples per method (value texts); overrides `values`.
  std::map<std::string, std::vector<std::vector<std::string>>> arg_domain;

  /// Fixed call script per thread. When non-empty it replaces the
  /// most-general client and fixes the thread count.
  std::vector<std::vector<ScenarioCall>> scenario;

  std::size_t max_states = 10'000'000;
  std::size_t max_transitions = 200'000'000;
};

/// Argument tuples a client may pass, precomputed per (thread, op index, method).
class CallTable {
 public:
  CallTable(const ObjectModel& model, const ClientConfig& config);

  int threads() const noexcept { return threads_; }
  int ops(int thread) const { return ops_[thread - 1]; }

  /// Methods (by index) thread may call as its op-th call, with argument tuples.
  const std::vector<std::pair<int, std::vector<std::vector<Value>>>>& choices(int thread,
                                                                              int op) const {
    return table_[thread - 1][op];
  }

 private:
  int threads_ = 0;
  std::vector<int> ops_;
  std::vector<std::vector<std::vector<std::pair<int, std::vector<std::vector<Value>>>>>> table_;
};

/// Values a client passes for a parameter: the domain's carrier without the
/// atom `null`.
std::vector<Value> argument_carrier(const ObjectModel& model, const Domain& d);

}  // namespace linchk
