#pragma once

#include <optional>
#include <string>
#include <vector>

#include "linchk/bisim.hpp"
#include "linchk/client.hpp"
#include "linchk/modelir.hpp"
#include "linchk/verdict.hpp"

namespace linchk {

struct ProgressCheckRequest {
  ObjectModel concrete;
  /// Lock-free abstract object; the atomic specification of `concrete` when
  /// absent, which is sound only for fixed linearization points.
  std::optional<ObjectModel> abstract;
  ClientConfig config;
};

/// Name of the abstract model the request compares against.
std::string abstract_name(const ProgressCheckRequest& req);

/// Lock-freedom of the concrete object relative to the abstract one, by
/// divergence-sensitive branching bisimilarity of their object systems.
Verdict check_lockfree(const ProgressCheckRequest& req);

/// States with an internal lasso inside their block of p, ascending.
std::vector<StateId> divergent_states(const Lts& lts, const Partition& p);

}  // namespace linchk
