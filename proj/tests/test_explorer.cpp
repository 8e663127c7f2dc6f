#include <catch_amalgamated.hpp>

#include <fstream>
#include <map>
#include <sstream>

#include "linchk/bench.hpp"
#include "linchk/errors.hpp"
#include "linchk/explorer.hpp"
#include "linchk/history.hpp"
#include "support.hpp"

using namespace linchk;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ObjectModel model(const std::string& file, std::map<std::string, Value> overrides = {}) {
  return parse_model(slurp(test::model_path(file)), overrides);
}

ClientConfig bounds(int threads, int ops, int values = 0) {
  ClientConfig c;
  c.threads = threads;
  c.max_ops_per_thread = ops;
  c.values = values;
  return c;
}

ClientConfig racing_scenario() {
  ClientConfig c;
  c.scenario = {{{"Enq", {"a"}}}, {{"Deq", {}}}, {{"Enq", {"b"}}}};
  return c;
}

// Does some run have exactly this visible projection (up to its length)?
bool has_trace(const Lts& l, const Trace& t) { return traces_up_to(l, t.size()).count(t) == 1; }

}  // namespace

TEST_CASE("one atomic skip: call, tau, ret") {
  ObjectModel m = parse_model(slurp(test::fixture("skip.obj")));
  Lts l = explore(m, bounds(1, 1));
  CHECK(l.state_count() == 4);
  CHECK(l.transition_count() == 3);
  CHECK(store_aut(l) ==
        "des (0, 3, 4)\n"
        "(0, \"CALL !T1 !m !VOID\", 1)\n"
        "(1, \"i\", 2)\n"
        "(2, \"RET !T1 !m !VOID\", 3)\n");
  CHECK(l.note(1) == "t1.L1");
}

TEST_CASE("zero methods give a single state") {
  ObjectModel m = parse_model(slurp(test::fixture("empty.obj")));
  for (int k = 1; k <= 3; ++k) {
    Lts l = explore(m, bounds(k, 2));
    CHECK(l.state_count() == 1);
    CHECK(l.transition_count() == 0);
  }
}

TEST_CASE("racing Enq and Deq scenario contains both completions of the Deq") {
  ObjectModel m = model("hw_queue.obj");
  Lts l = explore(m, racing_scenario());
  const Trace prefix = {"CALL !T1 !Enq !a", "CALL !T2 !Deq !VOID", "CALL !T3 !Enq !b"};
  Trace deq_b = prefix;
  deq_b.insert(deq_b.end(), {"RET !T1 !Enq !VOID", "RET !T2 !Deq !b", "RET !T3 !Enq !VOID"});
  Trace deq_a = prefix;
  deq_a.insert(deq_a.end(), {"RET !T1 !Enq !VOID", "RET !T2 !Deq !a", "RET !T3 !Enq !VOID"});
  CHECK(has_trace(l, deq_b));
  CHECK(has_trace(l, deq_a));
  // Regression values of this instance.
  CHECK(l.state_count() == 440);
  CHECK(l.transition_count() == 1030);
}

TEST_CASE("object system sizes are stable") {
  Lts hw = explore(model("hw_queue.obj"), bounds(2, 2));
  CHECK(hw.state_count() == 927);
  CHECK(hw.transition_count() == 1714);
  Lts tr = explore(model("treiber.obj"), bounds(2, 2));
  CHECK(tr.state_count() == 3019);
  CHECK(tr.transition_count() == 5092);
}

TEST_CASE("exploration is deterministic") {
  for (const auto& b : list_benchmarks()) {
    ObjectModel m = load_benchmark_model(b, b.config);
    if (b.name == "buggy_hw_queue") continue;  // same code as hw_queue, larger bound
    Lts one = explore(m, b.config);
    Lts two = explore(m, b.config);
    CHECK(store_aut(one) == store_aut(two));
  }
}

TEST_CASE("visible labels alternate per thread along every path") {
  for (const auto& b : list_benchmarks()) {
    if (b.name == "buggy_hw_queue") continue;
    ObjectModel m = load_benchmark_model(b, b.config);
    Lts l = explore(m, b.config);
    // Per-thread open-call state is a function of the state, so checking every
    // transition against the state's labelling covers every path.
    std::vector<std::map<int, int>> open(l.state_count());
    std::vector<char> seen(l.state_count(), 0);
    std::vector<StateId> stack = {l.initial()};
    seen[l.initial()] = 1;
    bool ok = true;
    while (!stack.empty() && ok) {
      StateId s = stack.back();
      stack.pop_back();
      for (const Transition& t : l.out(s)) {
        const ActionLabel& a = l.label(t.label);
        std::map<int, int> next = open[s];
        if (a.kind == ActionLabel::Kind::call) {
          ok = ok && next[a.thread] == 0;
          next[a.thread] = 1;
        } else if (a.kind == ActionLabel::Kind::ret) {
          ok = ok && next[a.thread] == 1;
          next[a.thread] = 0;
        }
        if (!seen[t.dst]) {
          seen[t.dst] = 1;
          open[t.dst] = next;
          stack.push_back(t.dst);
        } else {
          ok = ok && open[t.dst] == next;
        }
      }
    }
    CHECK(ok);
  }
}

TEST_CASE("more operations never remove traces") {
  for (const char* file : {"hw_queue.obj", "treiber.obj", "spinlock_queue.obj"}) {
    ObjectModel m1 = model(file, {{"OPS", 1}});
    ObjectModel m2 = model(file, {{"OPS", 2}});
    auto small = traces_up_to(explore(m1, bounds(2, 1)), 4);
    auto large = traces_up_to(explore(m2, bounds(2, 2)), 4);
    for (const auto& t : small) CHECK(large.count(t) == 1);
  }
}

TEST_CASE("argument choice") {
  ObjectModel m = model("hw_queue.obj");
  // Distinct mode: thread t's op-th call gets the value at slot op*threads + t-1.
  auto traces = traces_up_to(explore(m, bounds(2, 2)), 1);
  CHECK(traces.count({"CALL !T1 !Enq !a"}) == 1);
  CHECK(traces.count({"CALL !T2 !Enq !b"}) == 1);
  CHECK(traces.count({"CALL !T1 !Enq !b"}) == 0);
  auto later = traces_up_to(explore(m, bounds(2, 2)), 3);
  CHECK(later.count({"CALL !T1 !Enq !a", "RET !T1 !Enq !VOID", "CALL !T1 !Enq !c"}) == 1);
  // values = 2: every call may pass a or b.
  auto two = traces_up_to(explore(m, bounds(2, 2, 2)), 1);
  CHECK(two.count({"CALL !T1 !Enq !b"}) == 1);
  CHECK(two.count({"CALL !T2 !Enq !a"}) == 1);
  CHECK(two.count({"CALL !T2 !Enq !c"}) == 0);
  // Explicit argument tuples.
  ClientConfig c = bounds(1, 1);
  c.arg_domain["Enq"] = {{"h"}};
  auto explicit_args = traces_up_to(explore(m, c), 1);
  CHECK(explicit_args.count({"CALL !T1 !Enq !h"}) == 1);
  CHECK(explicit_args.size() == 3);  // empty trace, Enq(h), Deq
}

TEST_CASE("ceilings raise a resource error") {
  ClientConfig c = bounds(2, 2);
  c.max_states = 100;
  CHECK_THROWS_AS(explore(model("treiber.obj"), c), ResourceLimitError);
  c = bounds(2, 2);
  c.max_transitions = 100;
  CHECK_THROWS_AS(explore(model("treiber.obj"), c), ResourceLimitError);
}

TEST_CASE("modelling errors stop exploration") {
  CHECK_THROWS_AS(explore(parse_model(slurp(test::fixture("stuck.obj"))), bounds(2, 2)), ModelError);
  CHECK_THROWS_AS(explore(parse_model(slurp(test::fixture("overflow.obj"))), bounds(2, 2)), ModelError);
  // Within its range the same model is fine.
  CHECK(explore(parse_model(slurp(test::fixture("overflow.obj"))), bounds(2, 1)).state_count() > 1);
}

TEST_CASE("spec exploration") {
  ObjectModel m = model("hw_queue.obj");
  ClientConfig one = bounds(1, 1);
  one.arg_domain["Enq"] = {{"a"}};
  Lts l = explore_spec(m, one);
  CHECK(traces_up_to(l, 5) == std::set<Trace>{{},
                                              {"CALL !T1 !Deq !VOID"},
                                              {"CALL !T1 !Deq !VOID", "RET !T1 !Deq !EMPTY"},
                                              {"CALL !T1 !Enq !a"},
                                              {"CALL !T1 !Enq !a", "RET !T1 !Enq !VOID"}});
  // Every method run is call, one internal step, return.
  for (const Transition& t : l.transitions()) {
    const ActionLabel& a = l.label(t.label);
    if (a.kind == ActionLabel::Kind::call) {
      REQUIRE(l.out(t.dst).size() == 1);
      CHECK(l.out(t.dst)[0].label == kTau);
      StateId mid = l.out(t.dst)[0].dst;
      REQUIRE(l.out(mid).size() == 1);
      CHECK(l.label(l.out(mid)[0].label).kind == ActionLabel::Kind::ret);
    }
  }

  // With two threads calls overlap: some state has two pending calls.
  Lts two = explore_spec(m, bounds(2, 1));
  auto t = traces_up_to(two, 2);
  CHECK(t.count({"CALL !T1 !Enq !a", "CALL !T2 !Deq !VOID"}) == 1);
}

TEST_CASE("racing Enq and Deq scenario histories are well formed") {
  Lts l = explore(model("hw_queue.obj"), racing_scenario());
  for (const auto& t : traces_up_to(l, 6)) CHECK(well_formed(history_of(t)));
}
