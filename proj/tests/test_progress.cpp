#include <catch_amalgamated.hpp>

#include <fstream>
#include <sstream>

#include "linchk/errors.hpp"
#include "linchk/explorer.hpp"
#include "linchk/progress.hpp"
#include "support.hpp"

using namespace linchk;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ObjectModel model(const std::string& file) { return parse_model(slurp(test::model_path(file))); }

ProgressCheckRequest request(const std::string& file) {
  ProgressCheckRequest r{model(file), std::nullopt, ClientConfig{}};
  return r;
}

}  // namespace

TEST_CASE("a model is lock-free relative to itself") {
  for (const char* file : {"hw_queue.obj", "treiber.obj", "spinlock_queue.obj", "ms_two_lock_queue.obj"}) {
    INFO(file);
    ProgressCheckRequest r = request(file);
    r.config.max_ops_per_thread = 1;
    r.abstract = r.concrete;
    Verdict v = check_lockfree(r);
    CHECK(v.pass);
    CHECK(abstract_name(r) == r.concrete.name);
  }
}

TEST_CASE("Treiber stack is lock-free") {
  ProgressCheckRequest r = request("treiber.obj");
  Verdict v = check_lockfree(r);
  CHECK(v.pass);
  CHECK(abstract_name(r) == r.concrete.name + "_spec");
  CHECK(v.stat("concrete_states") == 3019);
  CHECK(v.stat("concrete_transitions") == 5092);
  CHECK(v.message == "lock-free relative to abstract model " + abstract_name(r));
}

TEST_CASE("two-lock queue spins on a lock held by a suspended thread") {
  ProgressCheckRequest r = request("ms_two_lock_queue.obj");
  Verdict v = check_lockfree(r);
  CHECK_FALSE(v.pass);
  REQUIRE(v.lasso);
  CHECK(v.lasso->side == 0);
  Lts conc = explore(r.concrete, r.config);
  CHECK(test::replay_lasso(conc, *v.lasso, divergence_partition(conc)) == "");
  // The spinning thread is not the one that took the lock first.
  REQUIRE(!v.lasso->cycle.empty());
  CHECK(v.lasso->cycle.front().note.rfind("t2.", 0) == 0);
  // Frozen witness.
  std::string cycle;
  for (const auto& st : v.lasso->cycle) cycle += st.note + ";";
  CHECK(cycle == "t2.D1;");
  CHECK(v.lasso->stem.empty());
}

TEST_CASE("spinlock queue is not lock-free") {
  ProgressCheckRequest r = request("spinlock_queue.obj");
  Verdict v = check_lockfree(r);
  CHECK_FALSE(v.pass);
  REQUIRE(v.lasso);
  Lts conc = explore(r.concrete, r.config);
  CHECK(test::replay_lasso(conc, *v.lasso, divergence_partition(conc)) == "");
}

TEST_CASE("mismatched signatures are a model error") {
  ProgressCheckRequest r = request("hw_queue.obj");
  r.abstract = model("treiber.obj");
  CHECK_THROWS_AS(check_lockfree(r), ModelError);
}

TEST_CASE("divergent_states") {
  Lts acyclic = load_aut("des (0, 3, 3)\n(0, \"i\", 1)\n(1, \"i\", 2)\n(0, \"i\", 2)\n");
  CHECK(divergent_states(acyclic, divergence_partition(acyclic)).empty());
  CHECK(divergent_states(acyclic, branching_partition(acyclic)).empty());

  Lts self = load_aut("des (0, 1, 1)\n(0, \"i\", 0)\n");
  CHECK(divergent_states(self, divergence_partition(self)) == std::vector<StateId>{0});

  // A tau cycle that crosses blocks is not divergence.
  Lts cross = load_aut("des (0, 3, 2)\n(0, \"i\", 1)\n(1, \"i\", 0)\n(1, \"CALL !T1 !a !VOID\", 1)\n");
  Partition strong = strong_partition(cross);
  REQUIRE_FALSE(strong.same_block(0, 1));
  CHECK(divergent_states(cross, strong).empty());
  // Branching merges 0 and 1, and then the cycle is inert.
  CHECK(divergent_states(cross, branching_partition(cross)) == std::vector<StateId>{0, 1});
}

TEST_CASE("HW queue spins when Deq finds the queue empty") {
  ObjectModel m = model("hw_queue.obj");
  Lts l = explore(m, ClientConfig{});
  Partition p = divergence_partition(l);
  auto div = divergent_states(l, p);
  REQUIRE_FALSE(div.empty());
  // Every divergent state has a pending Deq: some internal step of a Deq
  // label (D*) leaves it.
  for (StateId s : div) {
    bool deq_step = false;
    for (const Transition& t : l.out(s)) {
      auto index = static_cast<std::size_t>(&t - l.transitions().data());
      if (t.label == kTau && l.note(index).find(".D") != std::string::npos) deq_step = true;
    }
    CHECK(deq_step);
  }
}

TEST_CASE("specification systems never diverge") {
  for (const char* file : {"hw_queue.obj", "treiber.obj", "ms_queue.obj", "coarse_list.obj"}) {
    INFO(file);
    ObjectModel m = model(file);
    for (int ops = 1; ops <= 2; ++ops) {
      ClientConfig c;
      c.max_ops_per_thread = ops;
      Lts s = explore_spec(m, c);
      CHECK(divergent_states(s, divergence_partition(s)).empty());
    }
  }
}

TEST_CASE("divergence is constant on divergence-sensitive blocks") {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 200; ++i) {
    Lts l = test::random_lts(rng, {20, 3, 0.5});
    Partition p = divergence_partition(l);
    auto flags = divergence_flags(l, p);
    for (const auto& block : p.blocks()) {
      for (StateId s : block) CHECK(flags[s] == flags[block.front()]);
    }
  }
  for (const char* file : {"hw_queue.obj", "spinlock_queue.obj", "ms_two_lock_queue.obj"}) {
    Lts l = explore(model(file), ClientConfig{});
    Partition p = divergence_partition(l);
    auto flags = divergence_flags(l, p);
    for (const auto& block : p.blocks()) {
      for (StateId s : block) CHECK(flags[s] == flags[block.front()]);
    }
  }
}
