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
#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace linchk {

using StateId = std::uint32_t;
using LabelId = std::uint32_t;

/// Label id 0 is always the internal action.
inline constexpr LabelId kTau = 0;

/**
 * \brief Action of an object system: a call, a return, or an internal step.
 *
 * The origin of an internal step ("t1.E2") is kept for diagnostics only and
 * does not take part in equality.
 */
struct ActionLabel {
  enum class Kind : std::uint8_t { tau, call, ret };

  Kind kind = Kind::tau;
  int thread = 0;
  std::string method;
  std::string value;
  std::string origin;

  static ActionLabel tau(std::string origin = {});
  static ActionLabel call(int thread, std::string method, std::string arg);
  static ActionLabel ret(int thread, std::string method, std::string value);

  bool is_tau() const noexcept { return kind == Kind::tau; }
  bool visible() const noexcept { return kind != Kind::tau; }

  /// Wire text: "i", "CALL !T<k> !<M> !<v>" or "RET !T<k> !<M> !<v>".
  std::string aut_text() const;

  friend bool operator==(const ActionLabel& a, const ActionLabel& b) noexcept;
};

/// Parses an .aut label. Anything that is not a well-formed CALL or RET is tau,
/// with the original text kept as origin unless it is "i" or "tau".
ActionLabel parse_label(std::string_view text);

struct Transition {
  StateId src;
  LabelId label;
  StateId dst;

  friend bool operator==(const Transition&, const Transition&) = default;
};

/**
 * \brief Finite labelled transition system.
 *
 * Immutable once built. Transitions are sorted by (source, label id, target)
 * and visible label ids are ordered by their wire text, so two systems with
 * the same content compare equal member-wise.
 */
class Lts {
 public:
  /// Single state, no transitions.
  Lts();

  std::size_t state_count() const noexcept { return state_count_; }
  std::size_t transition_count() const noexcept { return transitions_.size(); }
  StateId initial() const noexcept { return initial_; }

  const std::vector<Transition>& transitions() const noexcept { return transitions_; }
  std::span<const Transition> out(StateId s) const;
  std::size_t out_begin(StateId s) const { return offsets_[s]; }

  const std::vector<ActionLabel>& labels() const noexcept { return labels_; }
  const ActionLabel& label(LabelId id) const { return labels_[id]; }
  std::optional<LabelId> find_label(const ActionLabel& label) const;

  /// Visible label ids that occur on some transition.
  std::vector<LabelId> alphabet() const;

  /// Diagnostic note of transition i (empty if none).
  std::string_view note(std::size_t transition_index) const;

 private:
  friend class LtsBuilder;

  std::size_t state_count_ = 1;
  StateId initial_ = 0;
  std::vector<ActionLabel> labels_;
  std::vector<Transition> transitions_;
  std::vector<std::size_t> offsets_;
  std::vector<std::uint32_t> note_of_;
  std::vector<std::string> notes_;
};

/// Accumulates states and transitions; build() sorts, removes duplicates and
/// prunes states that are unreachable from the initial state.
class LtsBuilder {
 public:
  LtsBuilder();

  StateId add_state();
  void ensure_states(std::size_t count);
  std::size_t state_count() const noexcept { return state_count_; }

  LabelId intern(const ActionLabel& label);
  std::uint32_t intern_note(std::string_view note);

  void add(StateId src, LabelId label, StateId dst, std::uint32_t note = 0);
  void add(StateId src, const ActionLabel& label, StateId dst);
  std::size_t transition_count() const noexcept { return transitions_.size(); }

  Lts build(StateId initial) &&;

  /// Keeps unreachable states. Used for disjoint unions.
  Lts build_unpruned(StateId initial) &&;

 private:
  Lts finish(StateId initial, bool prune);

  std::size_t state_count_ = 0;
  std::vector<ActionLabel> labels_;
  std::unordered_map<std::string, LabelId> label_index_;
  std::vector<Transition> transitions_;
  std::vector<std::uint32_t> notes_of_;
  std::vector<std::string> notes_;
  std::unordered_map<std::string, std::uint32_t> note_index_;
};

using Trace = std::vector<std::string>;

/// Visible traces of length at most depth from `start` (default: initial).
/// Exponential in depth; meant as a test oracle.
std::set<Trace> traces_up_to(const Lts& lts, std::size_t depth);
std::set<Trace> traces_up_to(const Lts& lts, std::size_t depth, StateId start);

/// Reflexive-transitive closure of tau from the given states, sorted.
std::vector<StateId> tau_closure(const Lts& lts, std::vector<StateId> from);

/// Renumbers states in breadth-first order from the initial state, visiting
/// successors by (label text, old target id).
Lts canonical_bfs(const Lts& lts);

/// Same states, initial state and transition set, comparing labels by text.
bool structurally_equal(const Lts& a, const Lts& b);

// Aldebaran interchange.
Lts load_aut(std::istream& in);
Lts load_aut(std::string_view text);
Lts load_aut_file(const std::string& path);
void store_aut(const Lts& lts, std::ostream& out);
std::string store_aut(const Lts& lts);

}  // namespace linchk
