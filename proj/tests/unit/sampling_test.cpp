#include <cmath>
#include <map>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "scripted_rng.hpp"

#include "bppsample/bench.hpp"
#include "bppsample/sampling.hpp"
#include "bppsample/trace_io.hpp"

using namespace bppsample;
using testing::ScriptedRng;

namespace {

void check_trace_invariants(const SampleTrace &trace, const Instance &inst) {
  FeasibleSet seen;
  std::int64_t count = 0;
  for (std::size_t k = 0; k < trace.entries.size(); ++k) {
    const TraceEntry &e = trace.entries[k];
    REQUIRE(e.iteration == static_cast<std::int64_t>(k) + 1);
    const bool fresh =
        is_feasible_partial(inst, e.candidate) && seen.insert(e.candidate);
    REQUIRE(e.is_new == fresh);
    count += fresh ? 1 : 0;
    REQUIRE(e.distinct_count == count);
  }
}

} // namespace

TEST_CASE("random_step is uniform over all masks") {
  const Instance inst({1, 2, 3}, 3);
  SamplerState state(99);
  std::vector<int> counts(8, 0);
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) {
    const auto s = random_step(inst, state);
    REQUIRE(s.mask < 8);
    ++counts[s.mask];
  }
  double chi2 = 0.0;
  const double expected = draws / 8.0;
  for (int c : counts) {
    chi2 += (c - expected) * (c - expected) / expected;
  }
  CHECK(chi2 < 18.475); // 7 degrees of freedom, p = 0.01
  CHECK(state.found.empty());
}

TEST_CASE("random_step is deterministic and respects n = 1") {
  const Instance inst({1}, 1);
  SamplerState a(5);
  SamplerState b(5);
  bool zero = false;
  bool one = false;
  for (int i = 0; i < 200; ++i) {
    const auto s = random_step(inst, a);
    REQUIRE(s == random_step(inst, b));
    REQUIRE(s.mask < 2);
    zero = zero || s.mask == 0;
    one = one || s.mask == 1;
  }
  CHECK(zero);
  CHECK(one);
}

TEST_CASE("walk step hand traces") {
  const Instance inst({2, 3, 5}, 5);

  SUBCASE("heaviest package first leaves nothing to add") {
    ScriptedRng rng({2}, {});
    CHECK(walk_step(inst, rng).mask == 0b100);
    CHECK(rng.exhausted());
  }
  SUBCASE("package 1, continue, then package 2") {
    ScriptedRng rng({0, 0}, {0.7});
    const auto s = walk_step(inst, rng);
    CHECK(s.mask == 0b011);
    CHECK(subset_weight(inst, s) == 5);
    CHECK(rng.exhausted());
  }
  SUBCASE("stop fires strictly below 1/(|left|+1)") {
    ScriptedRng stop({0}, {0.49});
    CHECK(walk_step(inst, stop).mask == 0b001);
    ScriptedRng edge({0, 0}, {0.5});
    CHECK(walk_step(inst, edge).mask == 0b011);
  }
}

TEST_CASE("walk filter removes overflowing packages before each draw") {
  // Packages 2 and 3 both fit next to package 1, but not together.
  const Instance inst({1, 4, 4}, 6);
  ScriptedRng rng({0, 1}, {0.9});
  // left = {2,3}: stop chance 1/3, continue; pick index 1 = package 3.
  CHECK(walk_step(inst, rng).mask == 0b101);
  CHECK(rng.exhausted());
}

TEST_CASE("walk outputs are always feasible and reach every feasible subset") {
  for (const auto &ni : default_suite(10)) {
    const auto oracle = enumerate_feasible(ni.instance);
    SamplerState state(derive_seed(3, 17));
    FeasibleSet seen;
    for (int i = 0; i < 100000; ++i) {
      const auto s = walk_step(ni.instance, state);
      REQUIRE(is_feasible_partial(ni.instance, s));
      seen.insert(s);
    }
    CHECK_MESSAGE(seen == oracle, ni.id);
  }
}

TEST_CASE("record_step bookkeeping") {
  const Instance inst({2, 3, 5}, 5);
  SampleTrace trace;
  SamplerState state;
  record_step(trace, state, inst, PackageSubset{0b001});
  CHECK(trace.entries.back().is_new);
  CHECK(trace.distinct_count() == 1);
  record_step(trace, state, inst, PackageSubset{0b001});
  CHECK_FALSE(trace.entries.back().is_new);
  CHECK(trace.distinct_count() == 1);
  record_step(trace, state, inst, PackageSubset{0b110});
  CHECK_FALSE(trace.entries.back().is_new);
  record_step(trace, state, inst, PackageSubset{0});
  CHECK_FALSE(trace.entries.back().is_new);
  record_step(trace, state, inst, PackageSubset{0b011});
  CHECK(trace.entries.back().is_new);
  CHECK(trace.distinct_count() == 2);
  CHECK(trace.iterations() == 5);
  CHECK(state.found.size() == 2);
  check_trace_invariants(trace, inst);
}

TEST_CASE("single package walk completes at once") {
  const Instance inst({1}, 1);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto t = run_until_complete(inst, Strategy::walk, seed, 1, {});
    REQUIRE(t.iterations() == 1);
    REQUIRE(t.distinct_count() == 1);
    REQUIRE(t.completed);
  }
}

TEST_CASE("single package random sampling takes two draws on average") {
  const Instance inst({1}, 1);
  double total = 0.0;
  const int seeds = 10000;
  for (int seed = 0; seed < seeds; ++seed) {
    const auto t = run_until_complete(inst, Strategy::random, seed, 1, {});
    REQUIRE(t.completed);
    REQUIRE(t.entries.back().candidate.mask == 1);
    total += static_cast<double>(t.iterations());
  }
  CHECK(total / seeds == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("run limits") {
  const Instance inst({2, 3, 5}, 5);
  CHECK_THROWS_AS(
      run_until_complete(inst, Strategy::walk, 1, 4, RunLimits{0, {}}),
      ValidationError);
  CHECK_THROWS_AS(run_until_complete(inst, Strategy::walk, 1, 0, {}),
                  ValidationError);
  CHECK_THROWS_AS(run_until_complete(inst, Strategy::anneal, 1, 4, {}),
                  ValidationError);

  // Ask for more than exists so the run can only stop on the limit.
  const auto capped =
      run_until_complete(inst, Strategy::random, 1, 5, RunLimits{37, {}});
  CHECK(capped.iterations() == 37);
  CHECK_FALSE(capped.completed);
  CHECK(capped.truncation == Truncation::max_iters);

  RunLimits instant;
  instant.budget = std::chrono::duration<double>(0.0);
  const auto starved = run_until_complete(inst, Strategy::random, 1, 4, instant);
  CHECK(starved.iterations() == 0);
  CHECK(starved.truncation == Truncation::budget);
}

TEST_CASE("completed runs end exactly at full coverage") {
  for (const auto &ni : default_suite(10)) {
    const auto oracle = static_cast<std::int64_t>(enumerate_feasible(ni.instance).size());
    for (Strategy s : {Strategy::random, Strategy::walk}) {
      const auto t = run_until_complete(ni.instance, s, 8, oracle, {}, ni.id);
      REQUIRE(t.completed);
      REQUIRE(t.distinct_count() == oracle);
      REQUIRE(t.entries.back().is_new);
      check_trace_invariants(t, ni.instance);
    }
  }
}

TEST_CASE("identical arguments give byte-identical traces") {
  const Instance inst({5, 7, 9, 11, 13, 17}, 30);
  const auto oracle = static_cast<std::int64_t>(enumerate_feasible(inst).size());
  for (Strategy s : {Strategy::random, Strategy::walk}) {
    const auto a = run_until_complete(inst, s, 77, oracle, {}, "x");
    const auto b = run_until_complete(inst, s, 77, oracle, {}, "x");
    std::ostringstream sa;
    std::ostringstream sb;
    write_trace_csv(a, sa);
    write_trace_csv(b, sb);
    CHECK(sa.str() == sb.str());
    CHECK(trace_metadata_json(a) == trace_metadata_json(b));
    CHECK(a == b);
  }
}

TEST_CASE("prob_new_random exact values") {
  CHECK(prob_new_random(3, 4, 1) == Rational(3, 8));
  CHECK(prob_new_random(3, 4, 0) == Rational(1, 2));
  CHECK(prob_new_random(5, 9, 9) == 0);
  CHECK_THROWS_AS(prob_new_random(3, 4, 5), ValidationError);
}

TEST_CASE("prob_complete_bound exact values") {
  CHECK(prob_complete_bound(1, 1, 1) == Rational(1, 2));
  CHECK(prob_complete_bound(2, 1, 1) == Rational(1, 4));
  CHECK(prob_complete_bound(1, 1, 3) == Rational(1, 8));
  CHECK_THROWS_AS(prob_complete_bound(3, 4, 3), ValidationError);
}

namespace {

// Probability that a uniform sequence of `draws` masks covers `targets`,
// by enumerating every sequence.
Rational exhaustive_completion(int n, const std::vector<std::uint32_t> &targets,
                               int draws) {
  const std::uint64_t per = std::uint64_t{1} << n;
  std::uint64_t total = 1;
  for (int i = 0; i < draws; ++i) {
    total *= per;
  }
  std::uint64_t hits = 0;
  for (std::uint64_t code = 0; code < total; ++code) {
    std::uint64_t seen = 0;
    std::uint64_t c = code;
    for (int i = 0; i < draws; ++i) {
      seen |= std::uint64_t{1} << (c % per);
      c /= per;
    }
    bool all = true;
    for (auto t : targets) {
      all = all && ((seen >> t) & 1u) != 0;
    }
    hits += all ? 1 : 0;
  }
  return Rational(hits, total);
}

} // namespace

TEST_CASE("exhaustive completion probability dominates the bound") {
  CHECK(exhaustive_completion(1, {1}, 3) == Rational(7, 8));
  const std::vector<Instance> cases{Instance({1}, 1), Instance({1, 1}, 1),
                                    Instance({1, 1}, 2), Instance({2, 3, 5}, 5)};
  for (const auto &inst : cases) {
    const auto targets = oracle::filter_all_masks(inst.weights(), inst.capacity());
    const auto f = static_cast<int>(targets.size());
    const int max_draws = inst.size() == 3 ? 6 : 7;
    for (int m = f; m <= max_draws; ++m) {
      const Rational exact = exhaustive_completion(inst.size(), targets, m);
      REQUIRE(exact >= prob_complete_bound(inst.size(), f, m));
    }
  }
}
