/*
 * Copyright 2026 The linchk Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "linchk/bisim.hpp"
#include "linchk/client.hpp"
#include "linchk/history.hpp"
#include "linchk/lts.hpp"
#include "linchk/modelir.hpp"
#include "linchk/verdict.hpp"

namespace linchk {

/// Deterministic automaton over visible labels; every state accepts.
struct Dfa {
  static constexpr std::uint32_t kNone = static_cast<std::uint32_t>(-1);

  std::vector<std::string> alphabet;  // sorted wire texts
  std::vector<std::vector<StateId>> subsets;
  std::vector<std::vector<std::uint32_t>> next;  // next[q][a], kNone if undefined

  std::size_t state_count() const noexcept { return subsets.size(); }
  std::optional<std::uint32_t> symbol(const std::string& text) const;
  bool accepts(const Trace& trace) const;
};

/// Subset construction over internal-step closures. Throws
/// ResourceLimitError above `max_subsets` subsets.
Dfa determinize(const Lts& lts, std::size_t max_subsets = 1'000'000);

/**
 * Trace inclusion trace(impl) within trace(spec). The spec side is
 * determinized, the impl side is walked as is. A failure carries the
 * shortest offending trace, ties broken by label text order.
 */
Verdict trace_included(const Lts& impl, const Lts& spec, std::size_t max_subsets = 1'000'000);

/// Sequential histories of at most `depth` operations that follow the
/// specification, with threads and arguments as the client would choose them.
std::vector<History> legal_sequential_histories(const SequentialSpec& spec,
                                                const ClientConfig& config, std::size_t depth);

/// A legal sequential history S with complete(H') linearizing to S for some
/// extension H' of h completing some of its pending calls.
std::optional<History> linearization_witness(const History& h, const SequentialSpec& spec);

struct BruteForceOptions {
  std::size_t max_states = 100'000;
  std::size_t max_histories = 5'000'000;
};

/// Checks every maximal history of `lts` by search for a linearization.
/// A failure carries the shortest failing prefix of the first failing history.
Verdict brute_force_linearizable(const Lts& lts, const SequentialSpec& spec,
                                 const BruteForceOptions& options = {});

struct LinOptions {
  /// Quotient both systems before the inclusion check; nullopt compares the
  /// systems as explored.
  std::optional<EquivalenceKind> quotient = EquivalenceKind::branching;
  std::size_t max_subsets = 1'000'000;
};

/// Explores model and its atomic specification, quotients both and checks
/// trace inclusion.
Verdict check_linearizability(const ObjectModel& model, const ClientConfig& config,
                              const LinOptions& options = {});

}  // namespace linchk
