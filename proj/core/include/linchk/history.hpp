#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "linchk/lts.hpp"

namespace linchk {

struct Event {
  enum class Kind : std::uint8_t { call, ret };

  Kind kind = Kind::call;
  int thread = 0;
  std::string method;
  std::string value;  // argument text for calls, return value text for returns

  static Event call(int thread, std::string method, std::string arg);
  static Event ret(int thread, std::string method, std::string value);

  bool is_call() const noexcept { return kind == Kind::call; }

  /// "t1 call Enq(a)" or "t2 ret Deq b"; a VOID argument prints as "()".
  std::string text() const;

  friend bool operator==(const Event&, const Event&) = default;
};

using History = std::vector<Event>;

/// A call with its matching return. `ret` is npos for a pending call.
struct Operation {
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  std::size_t call = 0;
  std::size_t ret = npos;
  int thread = 0;
  std::string method;
  std::string arg;
  std::string retval;

  bool pending() const noexcept { return ret == npos; }
};

/// Per-thread alternation of calls and returns, starting with a call, each
/// return naming the method of the open call.
bool well_formed(const History& h);

/// H|t.
History project(const History& h, int thread);

/// Drops every call that has no matching return.
History complete(const History& h);

std::vector<Operation> operations(const History& h);

/// a <_H b: a returns before b is called.
bool precedes(const Operation& a, const Operation& b) noexcept;

/// Starts with a call and each return immediately follows its call.
bool is_sequential(const History& h);

/// H linearizes to S: S sequential, equal per-thread projections, and
/// precedence of H contained in precedence of S. Both must be complete.
bool lin_relation(const History& h, const History& s);

/// Event of a visible label; nullopt for internal actions.
std::optional<Event> event_of(const ActionLabel& label);

/// History of a trace of wire label texts.
History history_of(const Trace& trace);

/// One line per event: "<n>. t<k> call <M>(<v>)" or "<n>. t<k> ret <M> <v>".
std::string format_history(const History& h);

}  // namespace linchk
