#include <catch_amalgamated.hpp>

#include "linchk/bench.hpp"
#include "linchk/errors.hpp"
#include "linchk/explorer.hpp"

using namespace linchk;

namespace {

const BenchRecord& record(const std::vector<BenchRecord>& rs, const std::string& check) {
  for (const auto& r : rs) {
    if (r.check == check) return r;
  }
  throw std::runtime_error("no " + check + " record");
}

}  // namespace

TEST_CASE("registry") {
  const auto& all = list_benchmarks();
  CHECK(all.size() == 7);
  const Benchmark* hw = find_benchmark("hw_queue");
  REQUIRE(hw);
  CHECK(hw->linearizable == Expectation::pass);
  CHECK(hw->spec_kind == "queue");
  const Benchmark* buggy = find_benchmark("buggy_hw_queue");
  REQUIRE(buggy);
  CHECK(buggy->linearizable == Expectation::fail);
  CHECK(find_benchmark("treiber_stack")->lock_free == Expectation::pass);
  CHECK(find_benchmark("ms_two_lock_queue")->lock_free == Expectation::fail);
  CHECK(find_benchmark("spinlock_queue")->linearizable == Expectation::not_applicable);
  CHECK(find_benchmark("nope") == nullptr);
  CHECK(to_string(Expectation::not_applicable) == "n/a");
}

TEST_CASE("every registered model parses and validates") {
  for (const auto& b : list_benchmarks()) {
    INFO(b.name);
    REQUIRE(model_source(b.file));
    ObjectModel m = load_benchmark_model(b, b.config);
    CHECK(validate(m, b.config).empty());
    CHECK(m.seqspec);
  }
}

TEST_CASE("overrides") {
  const Benchmark& b = *find_benchmark("coarse_list");
  ClientConfig c = effective_config(b, {});
  CHECK(c.values == 2);
  BenchOverrides o;
  o.ops = 1;
  o.threads = 3;
  c = effective_config(b, o);
  CHECK(c.max_ops_per_thread == 1);
  CHECK(c.threads == 3);
  CHECK(c.values == 2);
}

TEST_CASE("hw_queue row") {
  auto rs = run_benchmark("hw_queue");
  REQUIRE(rs.size() == 1);
  const BenchRecord& r = rs[0];
  CHECK(r.check == "lin");
  CHECK(r.pass);
  CHECK(r.matches());
  CHECK(r.threads == 2);
  CHECK(r.ops == 2);
  CHECK(r.reduction() >= 2.0);
  // Regression values.
  CHECK(r.states == 927);
  CHECK(r.transitions == 1714);
  CHECK(r.quotient_states == 118);
  CHECK(format_record(r) ==
        "benchmark=hw_queue check=lin threads=2 ops=2 verdict=pass expected=pass match=yes states=927 "
        "transitions=1714 quotient_states=118 quotient_transitions=" +
            std::to_string(r.quotient_transitions) + " factor=7.86");
  CHECK(format_record(r, true).find(" seconds=") != std::string::npos);
}

TEST_CASE("treiber_stack passes both checks") {
  auto rs = run_benchmark("treiber_stack");
  REQUIRE(rs.size() == 2);
  CHECK(record(rs, "lin").pass);
  CHECK(record(rs, "lockfree").pass);
  for (const auto& r : rs) CHECK(r.matches());
}

TEST_CASE("expected verdicts reproduce") {
  for (const auto& b : list_benchmarks()) {
    INFO(b.name);
    auto rs = run_benchmark(b.name);
    std::size_t expected = (b.linearizable != Expectation::not_applicable) +
                           (b.lock_free != Expectation::not_applicable);
    CHECK(rs.size() == expected);
    for (const auto& r : rs) {
      CHECK(r.matches());
      CHECK(r.quotient_states <= r.states);
      CHECK(r.reduction() >= 1.0);
    }
  }
}

TEST_CASE("unknown benchmark") { CHECK_THROWS_AS(run_benchmark("no_such_bench"), Error); }

TEST_CASE("reduction grows with the number of operations") {
  for (const char* name : {"hw_queue", "ms_queue"}) {
    INFO(name);
    double prev = 0;
    for (int ops = 2; ops <= 3; ++ops) {
      BenchOverrides o;
      o.ops = ops;
      auto rs = run_benchmark(name, o);
      const BenchRecord& r = record(rs, "lin");
      CHECK(r.pass);
      CHECK(r.reduction() >= prev);
      prev = r.reduction();
    }
    CHECK(prev >= 2.0);
  }
}
