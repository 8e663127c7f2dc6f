#include "linchk/explorer.hpp"

#include <algorithm>
#include <cstring>
#include <memory>
#include <set>
#include <unordered_map>

#include "linchk/errors.hpp"

namespace linchk {

namespace {

/// Byte strings with stable addresses.
class Arena {
 public:
  std::string_view store(const char* data, std::size_t n) {
    if (chunks_.empty() || used_ + n > kChunk) {
      chunks_.push_back(std::make_unique<char[]>(std::max(kChunk, n)));
      used_ = 0;
    }
    char* p = chunks_.back().get() + used_;
    std::memcpy(p, data, n);
    used_ += n;
    return {p, n};
  }

 private:
  static constexpr std::size_t kChunk = 1 << 20;
  std::vector<std::unique_ptr<char[]>> chunks_;
  std::size_t used_ = 0;
};

struct Bounds {
  long long lo = 0;
  long long hi = 0;
  void add(long long v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void add(const Domain& d) {
    switch (d.kind) {
      case Domain::Kind::integer:
        add(d.lo);
        add(d.hi);
        break;
      case Domain::Kind::boolean:
        add(1);
        break;
      case Domain::Kind::enumeration:
        for (Value a : d.atoms) add(a);
        break;
      case Domain::Kind::array:
        add(*d.element);
        break;
      case Domain::Kind::sequence:
        add(d.size);
        add(*d.element);
        break;
    }
  }
};

class Explorer {
 public:
  Explorer(const ObjectModel& model, const ClientConfig& config, bool diagnostic)
      : model_(model), config_(config), calls_(model, config), diagnostic_(diagnostic) {
    for (const auto& m : model_.methods) frame_size_ = std::max(frame_size_, m.frame_size);
    record_ = 3 + frame_size_;
    width_ = slot_width();
    notes_.resize(calls_.threads());
    for (int t = 1; t <= calls_.threads(); ++t) {
      for (const auto& m : model_.methods) {
        auto& per_method = notes_[t - 1].emplace_back();
        for (const auto& loc : m.locations) {
          per_method.push_back(builder_.intern_note("t" + std::to_string(t) + "." + loc.name));
        }
      }
    }
  }

  Lts run() {
    std::vector<Value> init(model_.shared_size + calls_.threads() * record_, 0);
    for (const auto& v : model_.shared) {
      std::copy(v.init.begin(), v.init.end(), init.begin() + v.offset);
    }
    intern(init);
    std::vector<Value> cur, next;
    for (std::size_t head = 0; head < states_.size(); ++head) {
      decode(states_[head], cur);
      expand(static_cast<StateId>(head), cur, next);
    }
    builder_.ensure_states(states_.size());
    return std::move(builder_).build(0);
  }

  std::vector<std::string> diagnostics() const {
    return {diagnostics_.begin(), diagnostics_.end()};
  }

 private:
  int slot_width() const {
    Bounds b;
    for (const auto& v : model_.shared) b.add(*v.domain);
    for (const auto& m : model_.methods) {
      b.add(static_cast<long long>(m.locations.size()) + 1);
      for (const auto& v : m.params) b.add(*v.domain);
      for (const auto& v : m.locals) b.add(*v.domain);
    }
    b.add(static_cast<long long>(model_.methods.size()));
    for (int t = 1; t <= calls_.threads(); ++t) b.add(calls_.ops(t));
    if (b.lo >= -128 && b.hi <= 127) return 1;
    if (b.lo >= -32768 && b.hi <= 32767) return 2;
    return 4;
  }

  void decode(std::string_view bytes, std::vector<Value>& out) const {
    std::size_t n = bytes.size() / width_;
    out.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const char* p = bytes.data() + i * width_;
      if (width_ == 1) {
        out[i] = static_cast<std::int8_t>(*p);
      } else if (width_ == 2) {
        std::int16_t v;
        std::memcpy(&v, p, 2);
        out[i] = v;
      } else {
        std::memcpy(&out[i], p, 4);
      }
    }
  }

  StateId intern(const std::vector<Value>& slots) {
    buf_.resize(slots.size() * width_);
    for (std::size_t i = 0; i < slots.size(); ++i) {
      char* p = buf_.data() + i * width_;
      if (width_ == 1) {
        *p = static_cast<char>(static_cast<std::int8_t>(slots[i]));
      } else if (width_ == 2) {
        auto v = static_cast<std::int16_t>(slots[i]);
        std::memcpy(p, &v, 2);
      } else {
        std::memcpy(p, &slots[i], 4);
      }
    }
    std::string_view key(buf_.data(), buf_.size());
    auto it = index_.find(key);
    if (it != index_.end()) return it->second;
    if (states_.size() >= config_.max_states) {
      throw ResourceLimitError("state ceiling of " + std::to_string(config_.max_states) +
                                   " exceeded",
                               states_.size() - head_);
    }
    std::string_view stored = arena_.store(buf_.data(), buf_.size());
    auto id = static_cast<StateId>(states_.size());
    states_.push_back(stored);
    index_.emplace(stored, id);
    return id;
  }

  void add(StateId src, LabelId label, const std::vector<Value>& next, std::uint32_t note) {
    StateId dst = intern(next);
    if (builder_.transition_count() >= config_.max_transitions) {
      throw ResourceLimitError("transition ceiling of " + std::to_string(config_.max_transitions) +
                                   " exceeded",
                               states_.size() - head_);
    }
    builder_.add(src, label, dst, note);
  }

  std::string args_text(const Method& m, const std::vector<Value>& args) const {
    if (args.empty()) return std::string(kVoid);
    std::string s;
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (i) s += ",";
      s += model_.value_text(*m.params[i].domain, args[i]);
    }
    return s;
  }

  LabelId call_label(int t, int mi, const std::vector<Value>& args) {
    std::string key = std::to_string(t) + ":" + std::to_string(mi);
    for (Value v : args) key += ":" + std::to_string(v);
    auto it = call_labels_.find(key);
    if (it != call_labels_.end()) return it->second;
    const Method& m = model_.methods[mi];
    LabelId id = builder_.intern(ActionLabel::call(t, m.name, args_text(m, args)));
    call_labels_.emplace(std::move(key), id);
    return id;
  }

  LabelId ret_label(int t, int mi, std::optional<Value> v) {
    std::uint64_t key = (static_cast<std::uint64_t>(t) << 48) ^
                        (static_cast<std::uint64_t>(mi) << 34) ^
                        (v ? (static_cast<std::uint64_t>(1) << 33) |
                                 static_cast<std::uint32_t>(*v)
                           : 0);
    auto it = ret_labels_.find(key);
    if (it != ret_labels_.end()) return it->second;
    const Method& m = model_.methods[mi];
    std::string text = v ? model_.value_text(*m.returns, *v) : std::string(kVoid);
    LabelId id = builder_.intern(ActionLabel::ret(t, m.name, text));
    ret_labels_.emplace(key, id);
    return id;
  }

  void report(const std::string& msg) {
    if (!diagnostic_) throw ModelError(msg);
    diagnostics_.insert(msg);
  }

  void expand(StateId src, std::vector<Value>& cur, std::vector<Value>& next) {
    head_ = src;
    for (int t = 1; t <= calls_.threads(); ++t) {
      std::size_t base = model_.shared_size + static_cast<std::size_t>(t - 1) * record_;
      Value pc = cur[base];
      Value ops_done = cur[base + 2];
      if (pc == 0) {
        if (ops_done >= calls_.ops(t)) continue;
        for (const auto& [mi, tuples] : calls_.choices(t, ops_done)) {
          const Method& m = model_.methods[mi];
          for (const auto& args : tuples) {
            next = cur;
            next[base] = m.entry + 1;
            next[base + 1] = mi;
            Value* frame = next.data() + base + 3;
            std::fill(frame, frame + frame_size_, 0);
            for (std::size_t i = 0; i < m.params.size(); ++i) frame[m.params[i].offset] = args[i];
            for (const auto& l : m.locals) {
              std::copy(l.init.begin(), l.init.end(), frame + l.offset);
            }
            add(src, call_label(t, mi, args), next, 0);
          }
        }
        continue;
      }
      int mi = cur[base + 1];
      const Method& m = model_.methods[mi];
      const Location& loc = m.locations[pc - 1];
      Frame before{cur.data(), cur.data() + base + 3};
      bool enabled = false;
      for (const Stmt& s : loc.edges) {
        try {
          if (!guard_holds(s, before)) continue;
          enabled = true;
          if (s.kind == Stmt::Kind::ret) {
            std::optional<Value> v;
            if (s.ret_value) v = eval_scalar(*s.ret_value, before);
            if (v && !m.returns->contains(*v)) {
              throw ExecFault("return value " + std::to_string(*v) + " outside " +
                              m.returns->describe());
            }
            next = cur;
            next[base] = 0;
            next[base + 1] = 0;
            next[base + 2] = ops_done + 1;
            std::fill(next.begin() + base + 3, next.begin() + base + record_, 0);
            add(src, ret_label(t, mi, v), next, 0);
          } else {
            next = cur;
            Frame after{next.data(), next.data() + base + 3};
            apply_updates(s, after);
            next[base] = s.target + 1;
            add(src, kTau, next, notes_[t - 1][mi][pc - 1]);
          }
        } catch (const ExecFault& e) {
          enabled = true;
          report("domain overflow in " + m.name + " at " + loc.name + " (line " +
                 std::to_string(s.line) + "): " + e.what());
        }
      }
      if (!enabled && !loc.is_return()) {
        report("stuck location " + loc.name + " in method " + m.name);
      }
    }
  }

  const ObjectModel& model_;
  const ClientConfig& config_;
  CallTable calls_;
  bool diagnostic_;
  int frame_size_ = 0;
  int record_ = 3;
  int width_ = 1;

  LtsBuilder builder_;
  Arena arena_;
  std::vector<std::string_view> states_;
  std::unordered_map<std::string_view, StateId> index_;
  std::vector<char> buf_;
  StateId head_ = 0;
  std::vector<std::vector<std::vector<std::uint32_t>>> notes_;
  std::unordered_map<std::string, LabelId> call_labels_;
  std::unordered_map<std::uint64_t, LabelId> ret_labels_;
  std::set<std::string> diagnostics_;
};

}  // namespace

Lts explore(const ObjectModel& model, const ClientConfig& config) {
  Explorer e(model, config, false);
  return e.run();
}

Lts explore_spec(const ObjectModel& model, const ClientConfig& config) {
  return explore(make_spec(model), config);
}

std::vector<std::string> validate(const ObjectModel& model, const ClientConfig& config) {
  Explorer e(model, config, true);
  try {
    e.run();
  } catch (const ResourceLimitError& err) {
    auto d = e.diagnostics();
    d.push_back(std::string("exploration incomplete: ") + err.what());
    return d;
  }
  return e.diagnostics();
}

}  // namespace linchk
