#include <catch_amalgamated.hpp>

#include <fstream>
#include <sstream>

#include "linchk/bisim.hpp"
#include "linchk/errors.hpp"
#include "linchk/explorer.hpp"
#include "linchk/progress.hpp"
#include "support.hpp"

using namespace linchk;
using test::relation_of;

namespace {

using Pairs = std::set<std::pair<StateId, StateId>>;

Lts build(std::size_t n, std::initializer_list<std::tuple<StateId, const char*, StateId>> edges) {
  LtsBuilder b;
  b.ensure_states(n);
  for (const auto& [s, l, d] : edges) {
    std::string text(l);
    b.add(s, text == "i" ? ActionLabel::tau() : test::call_label(text), d);
  }
  return std::move(b).build_unpruned(0);
}

// State 0 diverges by a tau self-loop and offers a to 1; state 2 offers a to 3
// without diverging.
Lts divergence_example() { return build(4, {{0, "i", 0}, {0, "a", 1}, {2, "a", 3}}); }

bool has_tau_self_loop(const Lts& l) {
  for (const auto& t : l.transitions()) {
    if (t.label == kTau && t.src == t.dst) return true;
  }
  return false;
}

// Every transition of the lasso exists in `l` with the given label text.
bool replays(const Lts& l, const std::vector<PathStep>& steps) {
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const PathStep& s = steps[i];
    if (i > 0 && steps[i - 1].dst != s.src) return false;
    bool found = false;
    for (const auto& t : l.out(s.src)) {
      if (t.dst == s.dst && l.label(t.label).aut_text() == s.label) found = true;
    }
    if (!found) return false;
  }
  return true;
}

std::vector<Lts> random_batch(std::uint64_t seed, int count, std::size_t max_states) {
  std::mt19937_64 rng(seed);
  std::vector<Lts> out;
  for (int i = 0; i < count; ++i) {
    double density = 0.5 * i / std::max(1, count - 1);
    out.push_back(test::random_lts(rng, {max_states, 4, density}));
  }
  return out;
}

}  // namespace

TEST_CASE("naive relation on tiny systems") {
  CHECK(naive_branching_relation(Lts()) == Pairs{{0, 0}});
  Lts two = build(2, {{0, "i", 1}});
  CHECK(naive_branching_relation(two) == Pairs{{0, 0}, {0, 1}, {1, 0}, {1, 1}});
  CHECK(branching_partition(two).block_count() == 1);
  CHECK_THROWS_AS(naive_branching_relation(two, 1), Error);
}

TEST_CASE("partition numbering follows the smallest member") {
  Partition p(std::vector<std::uint32_t>{7, 3, 7, 3, 9});
  CHECK(p.block_ids() == std::vector<std::uint32_t>{0, 1, 0, 1, 2});
  CHECK(p.block(1) == std::vector<StateId>{1, 3});
  CHECK(Partition::discrete(3).block_count() == 3);
  CHECK(Partition::discrete(3).refines(p) == false);
  CHECK(Partition(std::vector<std::uint32_t>{0, 1, 0, 2, 3}).refines(p));
}

TEST_CASE("without internal steps branching, weak and strong coincide") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 100; ++i) {
    Lts l = test::random_lts(rng, {20, 3, 0.0});
    Partition s = strong_partition(l);
    CHECK(branching_partition(l) == s);
    CHECK(weak_partition(l) == s);
    CHECK(divergence_partition(l) == s);
  }
}

TEST_CASE("distinct offers give singleton strong blocks") {
  Lts l = build(3, {{0, "a", 1}, {1, "b", 2}, {2, "c", 0}});
  CHECK(strong_partition(l).block_count() == 3);
  // A strong-minimal system is its own quotient.
  CHECK(structurally_equal(quotient(l, strong_partition(l)), l));
}

TEST_CASE("MS queue Deq fragment: branching separates s1 and s3, weak merges them") {
  Lts l = load_aut_file(test::fixture("ms_deq_fragment.aut"));
  const StateId s1 = 1, s2 = 2, s3 = 3, s4 = 4, s5 = 5;
  Partition br = branching_partition(l);
  Partition wk = weak_partition(l);
  CHECK_FALSE(br.same_block(s1, s3));
  CHECK(wk.same_block(s1, s3));
  CHECK_FALSE(br.same_block(s2, s4));
  CHECK(br.same_block(s2, s5));
  CHECK_FALSE(wk.same_block(s2, s4));
  CHECK(wk.same_block(s2, s5));
  CHECK(relation_of(br) == naive_branching_relation(l));
}

TEST_CASE("HW fragment: same traces, different branching behaviour") {
  Lts l = load_aut_file(test::fixture("hw_fragment.aut"));
  const StateId s = 6, r = 7;
  CHECK_FALSE(branching_partition(l).same_block(s, r));
  CHECK(relation_of(branching_partition(l)) == naive_branching_relation(l));
}

TEST_CASE("standard transfer clause on a distinguishing instance") {
  // Matching 2's b step from 4 needs 4 =tau=> 5 -b-> 5 with 5 related to 2,
  // which fails, so the standard clause separates 2 and 4. Checking only the
  // end points of the matching path would relate them.
  Lts l = build(6, {{0, "a", 3}, {1, "i", 0}, {2, "a", 1}, {2, "b", 5}, {2, "i", 5},
                    {4, "a", 1}, {4, "i", 4}, {4, "i", 5}, {5, "b", 5}});
  auto naive = naive_branching_relation(l);
  Partition p = branching_partition(l);
  CHECK(relation_of(p) == naive);
  CHECK(test::is_branching_bisimulation(l, p));
  CHECK_FALSE(p.same_block(2, 4));
}

TEST_CASE("branching partition agrees with the naive fixpoint on random systems") {
  int checked = 0;
  for (const Lts& l : random_batch(20240611, 300, 30)) {
    CHECK(relation_of(branching_partition(l)) == naive_branching_relation(l));
    ++checked;
  }
  CHECK(checked == 300);
}

TEST_CASE("computed partitions are maximal bisimulations") {
  for (const Lts& l : random_batch(99, 60, 10)) {
    Partition p = branching_partition(l);
    REQUIRE(test::is_branching_bisimulation(l, p));
    // Merging any two blocks breaks the transfer condition.
    for (std::uint32_t a = 0; a < p.block_count(); ++a) {
      for (std::uint32_t b = a + 1; b < p.block_count(); ++b) {
        std::vector<std::uint32_t> ids = p.block_ids();
        for (auto& id : ids) {
          if (id == b) id = a;
        }
        CHECK_FALSE(test::is_branching_bisimulation(l, Partition(ids)));
      }
    }
    Partition s = strong_partition(l);
    CHECK(test::is_strong_bisimulation(l, s));
  }
}

TEST_CASE("refinement chain strong, div, branching, weak") {
  for (const Lts& l : random_batch(5, 200, 25)) {
    Partition s = strong_partition(l);
    Partition d = divergence_partition(l);
    Partition b = branching_partition(l);
    Partition w = weak_partition(l);
    CHECK(s.refines(d));
    CHECK(d.refines(b));
    CHECK(b.refines(w));
    CHECK(partition_of(l, EquivalenceKind::branching_div) == d);
  }
}

TEST_CASE("stuttering: tau paths between equivalent states stay in the class") {
  for (const Lts& l : random_batch(17, 200, 20)) {
    Partition p = branching_partition(l);
    // Depth-first over tau paths of length <= 5.
    for (StateId start = 0; start < l.state_count(); ++start) {
      std::vector<std::vector<StateId>> stack = {{start}};
      while (!stack.empty()) {
        std::vector<StateId> path = stack.back();
        stack.pop_back();
        if (p.same_block(path.front(), path.back())) {
          for (StateId mid : path) CHECK(p.same_block(mid, start));
        }
        if (path.size() > 5) continue;
        for (const auto& t : l.out(path.back())) {
          if (t.label != kTau) continue;
          auto next = path;
          next.push_back(t.dst);
          stack.push_back(std::move(next));
        }
      }
    }
  }
}

TEST_CASE("divergence separates an otherwise equivalent pair") {
  Lts l = divergence_example();
  CHECK(branching_partition(l).same_block(0, 2));
  CHECK_FALSE(divergence_partition(l).same_block(0, 2));
  auto flags = divergence_flags(l, branching_partition(l));
  CHECK(flags == std::vector<char>{1, 0, 0, 0});

  Lts diverging = build(2, {{0, "i", 0}, {0, "a", 1}});
  Lts plain = build(2, {{0, "a", 1}});
  CHECK(bisimilar(diverging, plain, EquivalenceKind::branching).pass);
  Verdict v = bisimilar(diverging, plain, EquivalenceKind::branching_div);
  CHECK_FALSE(v.pass);
  REQUIRE(v.lasso);
  CHECK(v.lasso->side == 0);
  CHECK(v.lasso->stem.empty());
  REQUIRE(v.lasso->cycle.size() == 1);
  CHECK(v.lasso->cycle[0].label == "i");
  CHECK(v.lasso->cycle[0].src == 0);
  CHECK(v.lasso->cycle[0].dst == 0);
}

TEST_CASE("without tau cycles divergence changes nothing") {
  std::mt19937_64 rng(23);
  int tested = 0;
  while (tested < 100) {
    Lts l = test::random_lts(rng, {20, 3, 0.3});
    bool cyclic = false;
    for (StateId s = 0; s < l.state_count() && !cyclic; ++s) {
      for (const auto& t : l.out(s)) {
        if (t.label != kTau) continue;
        auto back = tau_closure(l, {t.dst});
        if (std::binary_search(back.begin(), back.end(), s)) cyclic = true;
      }
    }
    if (cyclic) continue;
    CHECK(divergence_partition(l) == branching_partition(l));
    ++tested;
  }
}

TEST_CASE("divergence is constant on div blocks") {
  for (const Lts& l : random_batch(41, 200, 25)) {
    Partition d = divergence_partition(l);
    auto flags = divergence_flags(l, d);
    for (const auto& block : d.blocks()) {
      for (StateId s : block) CHECK(flags[s] == flags[block.front()]);
    }
  }
}

TEST_CASE("quotient rules") {
  for (const Lts& l : random_batch(8, 150, 20)) {
    // Singletons: the input without tau self-loops.
    Lts q0 = quotient(l, Partition::discrete(l.state_count()));
    CHECK_FALSE(has_tau_self_loop(q0));
    std::size_t loops = 0;
    for (const auto& t : l.transitions()) loops += t.label == kTau && t.src == t.dst;
    CHECK(q0.transition_count() == l.transition_count() - loops);

    for (auto kind : {EquivalenceKind::strong, EquivalenceKind::branching,
                      EquivalenceKind::branching_div, EquivalenceKind::weak}) {
      Partition p = partition_of(l, kind);
      Lts q = quotient(l, p);
      CHECK_FALSE(has_tau_self_loop(q));
      CHECK(q.state_count() == p.block_count());
      CHECK(traces_up_to(q, 5) == traces_up_to(l, 5));
      // Idempotence. Strong and divergence-sensitive bisimilarity observe the
      // tau self-loops the quotient drops, so only the two relations that
      // ignore them are idempotent under these rules.
      if (kind == EquivalenceKind::strong || kind == EquivalenceKind::branching_div) continue;
      Partition again = partition_of(q, kind);
      CHECK(again.block_count() == q.state_count());
      CHECK(structurally_equal(quotient(q, again), q));
    }
  }
}

TEST_CASE("tau self-loop only") {
  Lts l = build(1, {{0, "i", 0}});
  Lts q = quotient(l, branching_partition(l));
  CHECK(q.state_count() == 1);
  CHECK(q.transition_count() == 0);
}

TEST_CASE("bisimilar is reflexive and uses a disjoint union") {
  for (const Lts& l : random_batch(12, 60, 15)) {
    Lts u = disjoint_union(l, l);
    CHECK(u.state_count() == 2 * l.state_count());
    CHECK(u.transition_count() == 2 * l.transition_count());
    for (auto kind : {EquivalenceKind::strong, EquivalenceKind::branching,
                      EquivalenceKind::branching_div, EquivalenceKind::weak}) {
      CHECK(bisimilar(l, l, kind).pass);
    }
  }
}

TEST_CASE("HW queue Deq spin diverges where its spec does not") {
  std::ifstream in(test::model_path("hw_queue.obj"));
  std::stringstream ss;
  ss << in.rdbuf();
  ObjectModel m = parse_model(ss.str());
  ClientConfig c;
  c.scenario = {{{"Deq", {}}}, {{"Enq", {"a"}}}};
  Lts impl = explore(m, c);
  Lts spec = explore_spec(m, c);
  CHECK_FALSE(divergent_states(impl, divergence_partition(impl)).empty());
  CHECK(divergent_states(spec, divergence_partition(spec)).empty());
  Verdict v = bisimilar(impl, spec, EquivalenceKind::branching_div);
  CHECK_FALSE(v.pass);
  REQUIRE(v.lasso);
  CHECK(v.lasso->side == 0);
  CHECK(replays(impl, v.lasso->prefix));
  CHECK(replays(impl, v.lasso->stem));
  CHECK(replays(impl, v.lasso->cycle));
  REQUIRE_FALSE(v.lasso->cycle.empty());
  CHECK(v.lasso->cycle.front().src == v.lasso->cycle.back().dst);
  for (const auto& st : v.lasso->cycle) CHECK(st.label == "i");
  for (const auto& st : v.lasso->stem) CHECK(st.label == "i");
}

TEST_CASE("equivalence names") {
  CHECK(to_string(EquivalenceKind::branching_div) == "branching-div");
  CHECK(parse_equivalence("branching-div") == EquivalenceKind::branching_div);
  CHECK(parse_equivalence("branching_div") == EquivalenceKind::branching_div);
  CHECK(parse_equivalence("weak") == EquivalenceKind::weak);
  CHECK_FALSE(parse_equivalence("trace"));
}
