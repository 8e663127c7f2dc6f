#include <catch_amalgamated.hpp>

#include <fstream>
#include <sstream>

#include "linchk/errors.hpp"
#include "linchk/lts.hpp"
#include "support.hpp"

using namespace linchk;
using linchk::test::fixture;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Trace trace(std::initializer_list<const char*> labels) {
  Trace t;
  for (const char* l : labels) t.emplace_back(l);
  return t;
}

}  // namespace

TEST_CASE("labels parse to call, ret and tau") {
  auto c = parse_label("CALL !T1 !Enq !a");
  CHECK(c.kind == ActionLabel::Kind::call);
  CHECK(c.thread == 1);
  CHECK(c.method == "Enq");
  CHECK(c.value == "a");
  auto r = parse_label("RET !T12 !Deq !EMPTY");
  CHECK(r.kind == ActionLabel::Kind::ret);
  CHECK(r.thread == 12);
  CHECK(r.aut_text() == "RET !T12 !Deq !EMPTY");
  CHECK(parse_label("i").is_tau());
  CHECK(parse_label("tau").is_tau());
  CHECK(parse_label("t1.E2").is_tau());
  CHECK(parse_label("t1.E2").origin == "t1.E2");
  CHECK(parse_label("CALL !Tx !Enq !a").is_tau());
  CHECK(ActionLabel::tau("t1.L3").aut_text() == "i");
  // The origin is diagnostic only.
  CHECK(ActionLabel::tau("t1.L3") == ActionLabel::tau("t2.L9"));
}

TEST_CASE("default Lts is a single state") {
  Lts l;
  CHECK(l.state_count() == 1);
  CHECK(l.transition_count() == 0);
  CHECK(store_aut(l) == "des (0, 0, 1)\n");
}

TEST_CASE("minimal aut files load") {
  Lts tau = load_aut("des (0, 1, 2)\n(0, \"i\", 1)\n");
  CHECK(tau.state_count() == 2);
  REQUIRE(tau.transition_count() == 1);
  CHECK(tau.transitions()[0].label == kTau);
  CHECK(store_aut(tau) == "des (0, 1, 2)\n(0, \"i\", 1)\n");

  Lts loop = load_aut("des (0, 2, 2)\n(0,\"CALL !T1 !ENQ !A\",1)\n(1,\"RET !T1 !ENQ !VOID\",0)\n");
  CHECK(loop.state_count() == 2);
  CHECK(loop.transition_count() == 2);
  CHECK(loop.label(loop.out(0)[0].label).kind == ActionLabel::Kind::call);
  CHECK(loop.label(loop.out(1)[0].label).kind == ActionLabel::Kind::ret);

  CHECK(load_aut("des (0, 1, 2)\n(0, tau, 1)\n").transitions()[0].label == kTau);
}

TEST_CASE("malformed aut input reports the line") {
  auto line_of = [](const std::string& text) {
    try {
      load_aut(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return -1;
  };
  CHECK(line_of("dse (0, 0, 1)\n") == 1);
  CHECK(line_of("des (0, 1, 2)\n(0, \"i\", 5)\n") == 2);
  CHECK(line_of("des (0, 1, 2)\n(0, \"i, 1)\n") == 2);
  CHECK(line_of("des (0, 2, 2)\n(0, \"i\", 1)\n") > 0);
  CHECK(line_of("des (3, 0, 2)\n") == 1);
}

TEST_CASE("unreachable states are pruned on load") {
  Lts l = load_aut("des (0, 2, 4)\n(0, \"i\", 1)\n(2, \"i\", 3)\n");
  CHECK(l.state_count() == 2);
  CHECK(l.transition_count() == 1);
}

TEST_CASE("fixtures re-emit byte-identically") {
  for (const char* name : {"hw_fragment.aut", "ms_deq_fragment.aut"}) {
    std::string text = slurp(fixture(name));
    REQUIRE(!text.empty());
    CHECK(store_aut(load_aut(text)) == text);
    Lts l = load_aut(text);
    CHECK(structurally_equal(canonical_bfs(load_aut(store_aut(l))), canonical_bfs(l)));
  }
}

TEST_CASE("store sorts transitions by source, label text and target") {
  LtsBuilder b;
  b.ensure_states(3);
  b.add(1, ActionLabel::call(1, "b", "VOID"), 2);
  b.add(0, ActionLabel::call(1, "b", "VOID"), 2);
  b.add(0, ActionLabel::call(1, "a", "VOID"), 1);
  b.add(0, ActionLabel::tau(), 2);
  b.add(0, ActionLabel::tau(), 1);
  b.add(0, ActionLabel::tau(), 1);
  Lts l = std::move(b).build(0);
  CHECK(store_aut(l) ==
        "des (0, 5, 3)\n"
        "(0, \"CALL !T1 !a !VOID\", 1)\n"
        "(0, \"CALL !T1 !b !VOID\", 2)\n"
        "(0, \"i\", 1)\n"
        "(0, \"i\", 2)\n"
        "(1, \"CALL !T1 !b !VOID\", 2)\n");
}

TEST_CASE("traces_up_to") {
  Lts loop = load_aut("des (0, 2, 2)\n(0,\"CALL !T1 !ENQ !A\",1)\n(1,\"RET !T1 !ENQ !VOID\",0)\n");
  CHECK(traces_up_to(loop, 0) == std::set<Trace>{Trace{}});
  CHECK(traces_up_to(loop, 2) ==
        std::set<Trace>{Trace{}, trace({"CALL !T1 !ENQ !A"}),
                        trace({"CALL !T1 !ENQ !A", "RET !T1 !ENQ !VOID"})});
}

TEST_CASE("traces are monotone in depth and prefix closed") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 100; ++i) {
    Lts l = test::random_lts(rng, {12, 3, 0.4});
    auto t3 = traces_up_to(l, 3);
    auto t4 = traces_up_to(l, 4);
    for (const auto& t : t3) CHECK(t4.count(t) == 1);
    for (const auto& t : t4) {
      if (t.empty()) continue;
      Trace prefix(t.begin(), t.end() - 1);
      CHECK(t4.count(prefix) == 1);
    }
  }
}

TEST_CASE("HW fragment: s and r have the same traces") {
  Lts l = load_aut_file(fixture("hw_fragment.aut"));
  const StateId s = 6, r = 7;
  for (std::size_t d = 0; d <= 5; ++d) CHECK(traces_up_to(l, d, s) == traces_up_to(l, d, r));
  // Both completions of the Deq are present.
  auto from_s = traces_up_to(l, 3, s);
  CHECK(from_s.count(trace({"RET !T1 !Enq !VOID", "RET !T2 !Deq !b", "RET !T3 !Enq !VOID"})) == 1);
  CHECK(from_s.count(trace({"RET !T1 !Enq !VOID", "RET !T2 !Deq !a", "RET !T3 !Enq !VOID"})) == 1);
}

TEST_CASE("tau_closure") {
  Lts l = load_aut("des (0, 3, 4)\n(0, \"i\", 1)\n(1, \"i\", 2)\n(2, \"CALL !T1 !m !VOID\", 3)\n");
  CHECK(tau_closure(l, {0}) == std::vector<StateId>{0, 1, 2});
  CHECK(tau_closure(l, {2}) == std::vector<StateId>{2});
  CHECK(tau_closure(l, {3, 1}) == std::vector<StateId>{1, 2, 3});
}

TEST_CASE("random LTSs survive an aut round trip") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    Lts l = test::random_lts(rng, {20, 4, 0.5});
    // Reloading prunes unreachable states, so compare against the pruned form.
    Lts pruned = load_aut(store_aut(l));
    std::string once = store_aut(pruned);
    CHECK(store_aut(load_aut(once)) == once);
    CHECK(traces_up_to(pruned, 4) == traces_up_to(l, 4));
  }
}

TEST_CASE("canonical_bfs identifies isomorphic renumberings") {
  Lts a = load_aut("des (0, 3, 3)\n(0, \"CALL !T1 !a !VOID\", 1)\n(0, \"i\", 2)\n(2, \"CALL !T1 !b !VOID\", 1)\n");
  Lts b = load_aut("des (2, 3, 3)\n(2, \"CALL !T1 !a !VOID\", 0)\n(2, \"i\", 1)\n(1, \"CALL !T1 !b !VOID\", 0)\n");
  CHECK_FALSE(structurally_equal(a, b));
  CHECK(structurally_equal(canonical_bfs(a), canonical_bfs(b)));
}
