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

#include <cstdint>
#include <optional>
#include <set>
#include <string_view>
#include <utility>
#include <vector>

#include "linchk/lts.hpp"
#include "linchk/verdict.hpp"

namespace linchk {

enum class EquivalenceKind : std::uint8_t { strong, branching, branching_div, weak };

/// "strong", "branching", "branching-div", "weak".
std::string_view to_string(EquivalenceKind kind) noexcept;
std::optional<EquivalenceKind> parse_equivalence(std::string_view text) noexcept;

/**
 * \brief Equivalence classes over the states of an LTS.
 *
 * Blocks are numbered in order of their smallest member, so two partitions
 * with the same classes are equal member-wise.
 */
class Partition {
 public:
  Partition() = default;

  /// Any labelling of states by class; renumbered canonically.
  explicit Partition(const std::vector<std::uint32_t>& class_of);

  static Partition discrete(std::size_t states);

  std::size_t state_count() const noexcept { return block_of_.size(); }
  std::size_t block_count() const noexcept { return blocks_.size(); }
  std::uint32_t block_of(StateId s) const { return block_of_[s]; }
  const std::vector<std::uint32_t>& block_ids() const noexcept { return block_of_; }
  const std::vector<StateId>& block(std::uint32_t b) const { return blocks_[b]; }
  const std::vector<std::vector<StateId>>& blocks() const noexcept { return blocks_; }
  bool same_block(StateId a, StateId b) const { return block_of_[a] == block_of_[b]; }

  /// Every block of *this lies inside a block of `coarser`.
  bool refines(const Partition& coarser) const;

  friend bool operator==(const Partition&, const Partition&) = default;

 private:
  std::vector<std::uint32_t> block_of_;
  std::vector<std::vector<StateId>> blocks_;
};

Partition strong_partition(const Lts& lts);
Partition branching_partition(const Lts& lts);
Partition divergence_partition(const Lts& lts);
Partition weak_partition(const Lts& lts);
Partition partition_of(const Lts& lts, EquivalenceKind kind);

/// Greatest fixpoint of the branching bisimulation clauses, computed on
/// S x S directly. Throws Error above `bound` states.
std::set<std::pair<StateId, StateId>> naive_branching_relation(const Lts& lts,
                                                               std::size_t bound = 500);

/// States that can reach, by internal steps inside their block, a cycle of
/// internal steps inside that block.
std::vector<char> divergence_flags(const Lts& lts, const Partition& p);

/// Blocks become states, numbered by block index. Visible transitions are
/// kept; internal ones only between different blocks.
Lts quotient(const Lts& lts, const Partition& p);

/// States of b are shifted by a.state_count(); unreachable states are kept.
/// The initial state is a's.
Lts disjoint_union(const Lts& a, const Lts& b);

/**
 * Passes iff the initial states of a and b are equivalent in their disjoint
 * union. A failure carries the pair of initial blocks and, for
 * branching_div, an internal lasso in the side that diverges where the other
 * side does not.
 */
Verdict bisimilar(const Lts& a, const Lts& b, EquivalenceKind kind);

}  // namespace linchk
