#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "linchk/history.hpp"
#include "linchk/lts.hpp"

namespace linchk {

struct PathStep {
  StateId src = 0;
  std::string label;  // wire text; "i" for internal steps
  std::string note;   // origin of internal steps, e.g. "t1.L2"
  StateId dst = 0;
};

/// Path from the initial state to a divergent state, then internal steps
/// inside its class to a cycle of internal steps. States are numbered in the
/// LTS of `side` (0 for the first operand, 1 for the second).
struct Lasso {
  int side = 0;
  std::vector<PathStep> prefix;
  std::vector<PathStep> stem;
  std::vector<PathStep> cycle;
};

struct Verdict {
  bool pass = true;
  std::string message;
  std::optional<Trace> trace;
  std::optional<History> history;
  std::optional<Lasso> lasso;
  std::optional<std::pair<std::uint32_t, std::uint32_t>> initial_blocks;
  std::vector<std::pair<std::string, std::size_t>> stats;

  std::size_t stat(const std::string& key) const;
};

}  // namespace linchk
