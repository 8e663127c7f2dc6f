#include "linchk/history.hpp"

#include <algorithm>
#include <map>

namespace linchk {

Event Event::call(int thread, std::string method, std::string arg) {
  return {Kind::call, thread, std::move(method), std::move(arg)};
}

Event Event::ret(int thread, std::string method, std::string value) {
  return {Kind::ret, thread, std::move(method), std::move(value)};
}

std::string Event::text() const {
  std::string t = "t" + std::to_string(thread);
  if (is_call()) return t + " call " + method + "(" + (value == "VOID" ? "" : value) + ")";
  return t + " ret " + method + " " + value;
}

bool well_formed(const History& h) {
  std::map<int, const Event*> open;
  for (const Event& e : h) {
    auto it = open.find(e.thread);
    bool busy = it != open.end() && it->second;
    if (e.is_call()) {
      if (busy) return false;
      open[e.thread] = &e;
    } else {
      if (!busy || it->second->method != e.method) return false;
      it->second = nullptr;
    }
  }
  return true;
}

History project(const History& h, int thread) {
  History out;
  for (const Event& e : h) {
    if (e.thread == thread) out.push_back(e);
  }
  return out;
}

std::vector<Operation> operations(const History& h) {
  std::vector<Operation> ops;
  std::map<int, std::size_t> open;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const Event& e = h[i];
    if (e.is_call()) {
      open[e.thread] = ops.size();
      ops.push_back({i, Operation::npos, e.thread, e.method, e.value, {}});
    } else {
      auto it = open.find(e.thread);
      if (it == open.end()) continue;
      ops[it->second].ret = i;
      ops[it->second].retval = e.value;
      open.erase(it);
    }
  }
  return ops;
}

History complete(const History& h) {
  std::vector<char> keep(h.size(), 1);
  for (const auto& op : operations(h)) {
    if (op.pending()) keep[op.call] = 0;
  }
  History out;
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (keep[i]) out.push_back(h[i]);
  }
  return out;
}

bool precedes(const Operation& a, const Operation& b) noexcept {
  return !a.pending() && a.ret < b.call;
}

bool is_sequential(const History& h) {
  for (std::size_t i = 0; i < h.size(); ++i) {
    const Event& e = h[i];
    if (i % 2 == 0) {
      if (!e.is_call()) return false;
    } else {
      const Event& c = h[i - 1];
      if (e.is_call() || e.thread != c.thread || e.method != c.method) return false;
    }
  }
  return true;
}

bool lin_relation(const History& h, const History& s) {
  if (!is_sequential(s) || !well_formed(h)) return false;
  auto hops = operations(h);
  auto sops = operations(s);
  auto is_pending = [](const Operation& o) { return o.pending(); };
  if (std::any_of(hops.begin(), hops.end(), is_pending) ||
      std::any_of(sops.begin(), sops.end(), is_pending)) {
    return false;
  }
  std::vector<int> threads;
  for (const Event& e : h) threads.push_back(e.thread);
  for (const Event& e : s) threads.push_back(e.thread);
  std::sort(threads.begin(), threads.end());
  threads.erase(std::unique(threads.begin(), threads.end()), threads.end());
  for (int t : threads) {
    if (project(h, t) != project(s, t)) return false;
  }
  // Equal projections pair the j-th operation of a thread in h with the
  // j-th operation of that thread in s.
  auto index = [](const std::vector<Operation>& ops) {
    std::map<std::pair<int, int>, std::size_t> out;
    std::map<int, int> count;
    for (std::size_t i = 0; i < ops.size(); ++i) out[{ops[i].thread, count[ops[i].thread]++}] = i;
    return out;
  };
  auto hi = index(hops), si = index(sops);
  std::vector<std::size_t> image(hops.size());
  for (const auto& [key, i] : hi) image[i] = si.at(key);
  for (std::size_t a = 0; a < hops.size(); ++a) {
    for (std::size_t b = 0; b < hops.size(); ++b) {
      if (precedes(hops[a], hops[b]) && !precedes(sops[image[a]], sops[image[b]])) return false;
    }
  }
  return true;
}

std::optional<Event> event_of(const ActionLabel& label) {
  switch (label.kind) {
    case ActionLabel::Kind::call:
      return Event::call(label.thread, label.method, label.value);
    case ActionLabel::Kind::ret:
      return Event::ret(label.thread, label.method, label.value);
    case ActionLabel::Kind::tau:
      break;
  }
  return std::nullopt;
}

History history_of(const Trace& trace) {
  History h;
  for (const auto& text : trace) {
    if (auto e = event_of(parse_label(text))) h.push_back(*e);
  }
  return h;
}

std::string format_history(const History& h) {
  std::string out;
  for (std::size_t i = 0; i < h.size(); ++i) {
    out += std::to_string(i + 1) + ". " + h[i].text() + "\n";
  }
  return out;
}

}  // namespace linchk
