#include "linchk/progress.hpp"

#include "linchk/errors.hpp"
#include "linchk/explorer.hpp"

namespace linchk {

namespace {

void require_same_signatures(const ObjectModel& a, const ObjectModel& b) {
  auto fail = [&](const std::string& why) {
    throw ModelError("models " + a.name + " and " + b.name + " differ: " + why);
  };
  if (a.methods.size() != b.methods.size()) fail("number of methods");
  for (const auto& m : a.methods) {
    int j = b.method_index(m.name);
    if (j < 0) fail("method " + m.name + " missing");
    const Method& n = b.methods[j];
    if (m.params.size() != n.params.size()) fail("parameters of " + m.name);
    for (std::size_t i = 0; i < m.params.size(); ++i) {
      if (m.params[i].domain->describe() != n.params[i].domain->describe()) {
        fail("parameter domain of " + m.name);
      }
    }
    if (!m.returns != !n.returns) fail("return type of " + m.name);
  }
}

}  // namespace

std::string abstract_name(const ProgressCheckRequest& req) {
  return req.abstract ? req.abstract->name : req.concrete.name + "_spec";
}

Verdict check_lockfree(const ProgressCheckRequest& req) {
  ObjectModel abstract = req.abstract ? *req.abstract : make_spec(req.concrete);
  require_same_signatures(req.concrete, abstract);
  Lts conc = explore(req.concrete, req.config);
  Lts abs = explore(abstract, req.config);
  Verdict v = bisimilar(conc, abs, EquivalenceKind::branching_div);
  std::vector<std::pair<std::string, std::size_t>> stats = {
      {"concrete_states", conc.state_count()},
      {"concrete_transitions", conc.transition_count()},
      {"abstract_states", abs.state_count()},
      {"abstract_transitions", abs.transition_count()}};
  stats.insert(stats.end(), v.stats.begin(), v.stats.end());
  v.stats = std::move(stats);
  v.message = (v.pass ? "lock-free" : "not lock-free") + std::string(" relative to abstract model ") +
              abstract_name(req);
  return v;
}

std::vector<StateId> divergent_states(const Lts& lts, const Partition& p) {
  auto flags = divergence_flags(lts, p);
  std::vector<StateId> out;
  for (StateId s = 0; s < flags.size(); ++s) {
    if (flags[s]) out.push_back(s);
  }
  return out;
}

}  // namespace linchk
