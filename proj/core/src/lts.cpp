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

#include "linchk/lts.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <tuple>

#include "linchk/errors.hpp"

namespace linchk {

ParseError::ParseError(const std::string& message, int line, int column)
    : Error("line " + std::to_string(line) +
            (column > 0 ? ":" + std::to_string(column) : std::string()) + ": " + message),
      line_(line),
      column_(column),
      detail_(message) {}

ActionLabel ActionLabel::tau(std::string origin) {
  ActionLabel l;
  l.origin = std::move(origin);
  return l;
}

ActionLabel ActionLabel::call(int thread, std::string method, std::string arg) {
  ActionLabel l;
  l.kind = Kind::call;
  l.thread = thread;
  l.method = std::move(method);
  l.value = std::move(arg);
  return l;
}

ActionLabel ActionLabel::ret(int thread, std::string method, std::string value) {
  ActionLabel l;
  l.kind = Kind::ret;
  l.thread = thread;
  l.method = std::move(method);
  l.value = std::move(value);
  return l;
}

std::string ActionLabel::aut_text() const {
  switch (kind) {
    case Kind::tau:
      return "i";
    case Kind::call:
      return "CALL !T" + std::to_string(thread) + " !" + method + " !" + value;
    case Kind::ret:
      return "RET !T" + std::to_string(thread) + " !" + method + " !" + value;
  }
  return "i";
}

bool operator==(const ActionLabel& a, const ActionLabel& b) noexcept {
  if (a.kind != b.kind) return false;
  if (a.kind == ActionLabel::Kind::tau) return true;
  return a.thread == b.thread && a.method == b.method && a.value == b.value;
}

namespace {

std::vector<std::string_view> split_bang(std::string_view text) {
  std::vector<std::string_view> parts;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t next = text.find(" !", pos);
    if (next == std::string_view::npos) {
      parts.push_back(text.substr(pos));
      break;
    }
    parts.push_back(text.substr(pos, next - pos));
    pos = next + 2;
  }
  return parts;
}

bool parse_thread(std::string_view tok, int& thread) {
  if (tok.size() < 2 || tok[0] != 'T') return false;
  int v = 0;
  for (std::size_t i = 1; i < tok.size(); ++i) {
    if (tok[i] < '0' || tok[i] > '9') return false;
    v = v * 10 + (tok[i] - '0');
    if (v > 1'000'000) return false;
  }
  if (v < 1) return false;
  thread = v;
  return true;
}

bool plain_token(std::string_view tok) {
  if (tok.empty()) return false;
  for (char c : tok) {
    if (c == ' ' || c == '!' || c == '"') return false;
  }
  return true;
}

}  // namespace

ActionLabel parse_label(std::string_view text) {
  auto parts = split_bang(text);
  if (parts.size() == 4 && (parts[0] == "CALL" || parts[0] == "RET")) {
    int thread = 0;
    if (parse_thread(parts[1], thread) && plain_token(parts[2]) && plain_token(parts[3])) {
      if (parts[0] == "CALL") {
        return ActionLabel::call(thread, std::string(parts[2]), std::string(parts[3]));
      }
      return ActionLabel::ret(thread, std::string(parts[2]), std::string(parts[3]));
    }
  }
  if (text == "i" || text == "tau") return ActionLabel::tau();
  return ActionLabel::tau(std::string(text));
}

Lts::Lts() : offsets_{0, 0}, notes_{std::string()} { labels_.push_back(ActionLabel::tau()); }

std::span<const Transition> Lts::out(StateId s) const {
  return {transitions_.data() + offsets_[s], transitions_.data() + offsets_[s + 1]};
}

std::optional<LabelId> Lts::find_label(const ActionLabel& label) const {
  if (label.is_tau()) return kTau;
  for (LabelId i = 1; i < labels_.size(); ++i) {
    if (labels_[i] == label) return i;
  }
  return std::nullopt;
}

std::vector<LabelId> Lts::alphabet() const {
  std::vector<LabelId> ids;
  for (LabelId i = 1; i < labels_.size(); ++i) ids.push_back(i);
  return ids;
}

std::string_view Lts::note(std::size_t transition_index) const {
  return notes_[note_of_[transition_index]];
}

LtsBuilder::LtsBuilder() {
  labels_.push_back(ActionLabel::tau());
  notes_.emplace_back();
  note_index_.emplace(std::string(), 0);
}

StateId LtsBuilder::add_state() { return static_cast<StateId>(state_count_++); }

void LtsBuilder::ensure_states(std::size_t count) { state_count_ = std::max(state_count_, count); }

LabelId LtsBuilder::intern(const ActionLabel& label) {
  if (label.is_tau()) return kTau;
  std::string key = label.aut_text();
  auto [it, inserted] = label_index_.try_emplace(std::move(key), static_cast<LabelId>(labels_.size()));
  if (inserted) {
    ActionLabel copy = label;
    copy.origin.clear();
    labels_.push_back(std::move(copy));
  }
  return it->second;
}

std::uint32_t LtsBuilder::intern_note(std::string_view note) {
  auto [it, inserted] =
      note_index_.try_emplace(std::string(note), static_cast<std::uint32_t>(notes_.size()));
  if (inserted) notes_.emplace_back(note);
  return it->second;
}

void LtsBuilder::add(StateId src, LabelId label, StateId dst, std::uint32_t note) {
  ensure_states(static_cast<std::size_t>(std::max(src, dst)) + 1);
  transitions_.push_back({src, label, dst});
  notes_of_.push_back(note);
}

void LtsBuilder::add(StateId src, const ActionLabel& label, StateId dst) {
  LabelId id = intern(label);
  std::uint32_t note = label.is_tau() && !label.origin.empty() ? intern_note(label.origin) : 0;
  add(src, id, dst, note);
}

Lts LtsBuilder::build(StateId initial) && { return finish(initial, true); }

Lts LtsBuilder::build_unpruned(StateId initial) && { return finish(initial, false); }

Lts LtsBuilder::finish(StateId initial, bool prune) {
  ensure_states(static_cast<std::size_t>(initial) + 1);
  const std::size_t n = state_count_;

  // Renumber reachable states, keeping their relative order.
  std::vector<StateId> remap(n);
  std::size_t kept = n;
  if (prune) {
    std::vector<std::size_t> start(n + 1, 0);
    for (const auto& t : transitions_) ++start[t.src + 1];
    for (std::size_t i = 0; i < n; ++i) start[i + 1] += start[i];
    std::vector<StateId> succ(transitions_.size());
    {
      std::vector<std::size_t> fill(start.begin(), start.end() - 1);
      for (const auto& t : transitions_) succ[fill[t.src]++] = t.dst;
    }
    std::vector<char> seen(n, 0);
    std::vector<StateId> stack{initial};
    seen[initial] = 1;
    while (!stack.empty()) {
      StateId s = stack.back();
      stack.pop_back();
      for (std::size_t i = start[s]; i < start[s + 1]; ++i) {
        if (!seen[succ[i]]) {
          seen[succ[i]] = 1;
          stack.push_back(succ[i]);
        }
      }
    }
    kept = 0;
    for (std::size_t s = 0; s < n; ++s) {
      remap[s] = seen[s] ? static_cast<StateId>(kept++) : StateId(-1);
    }
  } else {
    for (std::size_t s = 0; s < n; ++s) remap[s] = static_cast<StateId>(s);
  }

  struct Entry {
    Transition t;
    std::uint32_t note;
  };
  std::vector<Entry> entries;
  entries.reserve(transitions_.size());
  std::vector<char> used(labels_.size(), 0);
  for (std::size_t i = 0; i < transitions_.size(); ++i) {
    const auto& t = transitions_[i];
    if (remap[t.src] == StateId(-1)) continue;
    entries.push_back({{remap[t.src], t.label, remap[t.dst]}, notes_of_[i]});
    used[t.label] = 1;
  }

  // Visible labels in wire-text order.
  std::vector<std::pair<std::string, LabelId>> order;
  for (LabelId i = 1; i < labels_.size(); ++i) {
    if (used[i]) order.emplace_back(labels_[i].aut_text(), i);
  }
  std::sort(order.begin(), order.end());
  std::vector<LabelId> relabel(labels_.size(), kTau);
  Lts lts;
  lts.labels_.clear();
  lts.labels_.push_back(ActionLabel::tau());
  for (const auto& [text, old] : order) {
    relabel[old] = static_cast<LabelId>(lts.labels_.size());
    lts.labels_.push_back(labels_[old]);
  }
  for (auto& e : entries) e.t.label = relabel[e.t.label];

  std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    return std::tie(a.t.src, a.t.label, a.t.dst) < std::tie(b.t.src, b.t.label, b.t.dst);
  });
  entries.erase(std::unique(entries.begin(), entries.end(),
                            [](const Entry& a, const Entry& b) { return a.t == b.t; }),
                entries.end());

  lts.state_count_ = kept;
  lts.initial_ = remap[initial];
  lts.transitions_.reserve(entries.size());
  lts.note_of_.reserve(entries.size());
  for (const auto& e : entries) {
    lts.transitions_.push_back(e.t);
    lts.note_of_.push_back(e.note);
  }
  lts.notes_ = notes_;
  lts.offsets_.assign(kept + 1, 0);
  for (const auto& t : lts.transitions_) ++lts.offsets_[t.src + 1];
  for (std::size_t i = 0; i < kept; ++i) lts.offsets_[i + 1] += lts.offsets_[i];

  *this = LtsBuilder();
  return lts;
}

std::vector<StateId> tau_closure(const Lts& lts, std::vector<StateId> from) {
  std::vector<char> seen(lts.state_count(), 0);
  std::vector<StateId> stack;
  for (StateId s : from) {
    if (!seen[s]) {
      seen[s] = 1;
      stack.push_back(s);
    }
  }
  std::vector<StateId> result;
  while (!stack.empty()) {
    StateId s = stack.back();
    stack.pop_back();
    result.push_back(s);
    for (const auto& t : lts.out(s)) {
      if (t.label == kTau && !seen[t.dst]) {
        seen[t.dst] = 1;
        stack.push_back(t.dst);
      }
    }
  }
  std::sort(result.begin(), result.end());
  return result;
}

namespace {

void collect_traces(const Lts& lts, const std::vector<StateId>& states, std::size_t depth,
                    Trace& prefix, std::set<Trace>& out) {
  out.insert(prefix);
  if (depth == 0) return;
  std::map<std::string, std::vector<StateId>> next;
  for (StateId s : states) {
    for (const auto& t : lts.out(s)) {
      if (t.label != kTau) next[lts.label(t.label).aut_text()].push_back(t.dst);
    }
  }
  for (auto& [text, targets] : next) {
    prefix.push_back(text);
    collect_traces(lts, tau_closure(lts, std::move(targets)), depth - 1, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

std::set<Trace> traces_up_to(const Lts& lts, std::size_t depth) {
  return traces_up_to(lts, depth, lts.initial());
}

std::set<Trace> traces_up_to(const Lts& lts, std::size_t depth, StateId start) {
  std::set<Trace> out;
  Trace prefix;
  collect_traces(lts, tau_closure(lts, {start}), depth, prefix, out);
  return out;
}

Lts canonical_bfs(const Lts& lts) {
  const std::size_t n = lts.state_count();
  std::vector<StateId> order;
  std::vector<StateId> index(n, StateId(-1));
  std::deque<StateId> queue{lts.initial()};
  index[lts.initial()] = 0;
  order.push_back(lts.initial());
  auto visit_from = [&](StateId s) {
    std::vector<std::pair<std::string, StateId>> succ;
    for (const auto& t : lts.out(s)) succ.emplace_back(lts.label(t.label).aut_text(), t.dst);
    std::sort(succ.begin(), succ.end());
    for (const auto& [text, d] : succ) {
      if (index[d] == StateId(-1)) {
        index[d] = static_cast<StateId>(order.size());
        order.push_back(d);
        queue.push_back(d);
      }
    }
  };
  while (!queue.empty()) {
    StateId s = queue.front();
    queue.pop_front();
    visit_from(s);
  }
  for (StateId s = 0; s < n; ++s) {
    if (index[s] == StateId(-1)) {
      index[s] = static_cast<StateId>(order.size());
      order.push_back(s);
    }
  }
  LtsBuilder b;
  b.ensure_states(n);
  for (std::size_t i = 0; i < lts.transition_count(); ++i) {
    const auto& t = lts.transitions()[i];
    ActionLabel l = lts.label(t.label);
    if (l.is_tau()) l.origin = std::string(lts.note(i));
    b.add(index[t.src], l, index[t.dst]);
  }
  return std::move(b).build_unpruned(0);
}

bool structurally_equal(const Lts& a, const Lts& b) {
  if (a.state_count() != b.state_count() || a.initial() != b.initial() ||
      a.transition_count() != b.transition_count()) {
    return false;
  }
  using Key = std::tuple<StateId, std::string, StateId>;
  std::vector<Key> ka, kb;
  for (const auto& t : a.transitions()) ka.emplace_back(t.src, a.label(t.label).aut_text(), t.dst);
  for (const auto& t : b.transitions()) kb.emplace_back(t.src, b.label(t.label).aut_text(), t.dst);
  std::sort(ka.begin(), ka.end());
  std::sort(kb.begin(), kb.end());
  return ka == kb;
}

}  // namespace linchk
