#include "linchk/client.hpp"

#include "linchk/errors.hpp"

namespace linchk {

std::vector<Value> argument_carrier(const ObjectModel& model, const Domain& d) {
  std::vector<Value> out;
  for (Value v : d.carrier()) {
    if (d.kind == Domain::Kind::enumeration && (*model.atoms)[v] == "null") continue;
    out.push_back(v);
  }
  if (out.empty()) throw ModelError("parameter domain " + d.describe() + " has no client values");
  return out;
}

namespace {

std::vector<Value> parse_args(const ObjectModel& model, const Method& m,
                              const std::vector<std::string>& texts) {
  if (texts.size() != m.params.size()) {
    throw ModelError("method " + m.name + " expects " + std::to_string(m.params.size()) +
                     " argument(s), got " + std::to_string(texts.size()));
  }
  std::vector<Value> out;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    auto v = model.parse_value(*m.params[i].domain, texts[i]);
    if (!v) {
      throw ModelError("argument '" + texts[i] + "' of " + m.name + " is not in " +
                       m.params[i].domain->describe());
    }
    out.push_back(*v);
  }
  return out;
}

void product(const std::vector<std::vector<Value>>& sets, std::size_t i, std::vector<Value>& cur,
             std::vector<std::vector<Value>>& out) {
  if (i == sets.size()) {
    out.push_back(cur);
    return;
  }
  for (Value v : sets[i]) {
    cur.push_back(v);
    product(sets, i + 1, cur, out);
    cur.pop_back();
  }
}

}  // namespace

CallTable::CallTable(const ObjectModel& model, const ClientConfig& config) {
  if (!config.scenario.empty()) {
    threads_ = static_cast<int>(config.scenario.size());
    for (const auto& script : config.scenario) {
      ops_.push_back(static_cast<int>(script.size()));
      auto& rows = table_.emplace_back();
      for (const auto& call : script) {
        int mi = model.method_index(call.method);
        if (mi < 0) throw ModelError("scenario calls unknown method " + call.method);
        rows.push_back({{mi, {parse_args(model, model.methods[mi], call.args)}}});
      }
    }
    return;
  }
  if (config.threads < 1) throw ModelError("thread count must be at least 1");
  if (config.max_ops_per_thread < 1) throw ModelError("ops per thread must be at least 1");
  if (config.values < 0) throw ModelError("value count must not be negative");
  threads_ = config.threads;
  ops_.assign(threads_, config.max_ops_per_thread);
  for (const auto& [name, tuples] : config.arg_domain) {
    if (model.method_index(name) < 0) throw ModelError("argument domain for unknown method " + name);
    (void)tuples;
  }

  // Fixed argument sets (explicit or first-n values) do not depend on the slot.
  std::vector<std::vector<std::vector<Value>>> fixed(model.methods.size());
  for (std::size_t mi = 0; mi < model.methods.size(); ++mi) {
    const Method& m = model.methods[mi];
    auto it = config.arg_domain.find(m.name);
    if (it != config.arg_domain.end()) {
      for (const auto& t : it->second) fixed[mi].push_back(parse_args(model, m, t));
    } else if (config.values > 0 || m.params.empty()) {
      std::vector<std::vector<Value>> sets;
      for (const auto& p : m.params) {
        auto c = argument_carrier(model, *p.domain);
        if (static_cast<int>(c.size()) > config.values) c.resize(config.values);
        sets.push_back(std::move(c));
      }
      std::vector<Value> cur;
      product(sets, 0, cur, fixed[mi]);
    }
  }

  for (int t = 1; t <= threads_; ++t) {
    auto& rows = table_.emplace_back();
    for (int op = 0; op < ops_[t - 1]; ++op) {
      auto& row = rows.emplace_back();
      for (std::size_t mi = 0; mi < model.methods.size(); ++mi) {
        const Method& m = model.methods[mi];
        bool distinct = config.values == 0 && !m.params.empty() && !config.arg_domain.count(m.name);
        if (!distinct) {
          row.push_back({static_cast<int>(mi), fixed[mi]});
          continue;
        }
        // Round-robin over threads keeps earlier calls' values when ops grow.
        std::size_t slot = static_cast<std::size_t>(op) * threads_ + static_cast<std::size_t>(t - 1);
        std::vector<Value> args;
        for (const auto& p : m.params) {
          auto c = argument_carrier(model, *p.domain);
          args.push_back(c[slot % c.size()]);
        }
        row.push_back({static_cast<int>(mi), {args}});
      }
    }
  }
}

}  // namespace linchk
