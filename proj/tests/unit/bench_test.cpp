#include <set>

#include "doctest.h"
#include "temp_dir.hpp"

#include "bppsample/bench.hpp"
#include "bppsample/trace_io.hpp"

using namespace bppsample;

namespace {

std::string tiny_plan() {
  return R"({
    "instances": [{"id": "twins", "capacity": 2, "weights": [1, 1]},
                  {"id": "trio", "capacity": 5, "weights": [2, 3, 5]}],
    "strategies": ["random", "walk", "anneal", "hybrid"],
    "runs_per_instance": 2,
    "base_seed": 9,
    "max_iters": 2000,
    "anneal_config": {"n_trotter": 20}
  })";
}

} // namespace

TEST_CASE("default suite") {
  const auto all = default_suite();
  CHECK(all.size() == 18);
  std::set<std::string> ids;
  for (const auto &ni : all) {
    ids.insert(ni.id);
    CHECK(ni.instance.capacity() == 100);
    CHECK((ni.instance.size() == 10 || ni.instance.size() == 12));
  }
  CHECK(ids.size() == 18);
  CHECK(ids.contains("n10_u1"));
  CHECK(ids.contains("n12_g3"));
  CHECK(default_suite(10).size() == 9);
  // Regeneration is stable.
  CHECK(default_suite(12).front().instance == default_suite(12).front().instance);
}

TEST_CASE("strategy model assignment") {
  CHECK(default_model(Strategy::random) == FitModel::f1);
  CHECK(default_model(Strategy::walk) == FitModel::f2);
  CHECK(default_model(Strategy::anneal) == FitModel::f3);
  CHECK(default_model(Strategy::hybrid) == FitModel::f2);
}

TEST_CASE("plan parsing") {
  testing::TempDir dir("plan");
  save_instance(Instance({3, 4}, 5), dir / "small.json");
  const auto plan = plan_from_json_text(R"({
    "instances": [{"id": "small", "path": "small.json"},
                  {"id": "gen", "generate": {"n": 6, "capacity": 20, "dist": "uniform:1,20", "seed": 4}}],
    "strategies": ["walk"],
    "runs_per_instance": 3,
    "seeds": [5, 6, 7],
    "max_iters": {"walk": 50},
    "budget_seconds": {"walk": 1.5},
    "switch_policy": {"min_iterations": 10},
    "include_incomplete": true,
    "grid_points": 11
  })", dir.path());
  REQUIRE(plan.instances.size() == 2);
  CHECK(plan.instances[0].instance == Instance({3, 4}, 5));
  CHECK(plan.instances[1].instance.size() == 6);
  CHECK(plan.strategies == std::vector<Strategy>{Strategy::walk});
  CHECK(plan.seed_for("small", 2) == 7);
  CHECK(plan.max_iters_for(Strategy::walk) == 50);
  CHECK(plan.max_iters_for(Strategy::random) == 1'000'000);
  CHECK(plan.budget_for(Strategy::walk) == 1.5);
  CHECK_FALSE(plan.budget_for(Strategy::anneal).has_value());
  CHECK(plan.switch_policy.min_iterations == 10);
  CHECK(plan.include_incomplete);
  CHECK(plan.grid_points == 11);

  const auto def = plan_from_json_text(R"({"instances": "default-n10"})");
  CHECK(def.instances.size() == 9);
  CHECK(def.strategies.size() == 4);
  CHECK(def.runs_per_instance == 2);
  CHECK(def.seed_for("n10_u1", 0) != def.seed_for("n10_u1", 1));
  CHECK(def.seed_for("n10_u1", 0) != def.seed_for("n10_u2", 0));

  CHECK_THROWS_AS(plan_from_json_text(R"({"instances": "default", "colour": 1})"),
                  ValidationError);
  CHECK_THROWS_AS(plan_from_json_text(R"({"instances": "mine"})"), ValidationError);
  CHECK_THROWS_AS(plan_from_json_text(R"({"instances": "default", "runs_per_instance": 0})"),
                  ValidationError);
  CHECK_THROWS_AS(plan_from_json_text(R"({"instances": "default", "strategies": []})"),
                  ValidationError);
  CHECK_THROWS_AS(plan_from_json_text(R"({"instances": "default", "strategies": ["greedy"]})"),
                  ValidationError);
  CHECK_THROWS_AS(plan_from_json_text(R"({"instances": "default", "seeds": [1], "runs_per_instance": 2})"),
                  ValidationError);
  CHECK_THROWS_AS(plan_from_json_text(R"({"instances": [{"id": "a/b", "capacity": 2, "weights": [1]}]})"),
                  ValidationError);
  CHECK_THROWS_AS(plan_from_json_text(R"({"instances": [{"id": "a", "capacity": 2, "weights": [1]},
                                                         {"id": "a", "capacity": 2, "weights": [1]}]})"),
                  ValidationError);
  CHECK_THROWS_AS(plan_from_json_text(R"({"instances": [{"id": "x", "path": "missing.json"}]})",
                                      dir.path()),
                  ValidationError);
  CHECK_THROWS_AS(plan_from_json_text("{"), ValidationError);
}

TEST_CASE("benchmark on the smallest instances") {
  testing::TempDir dir("bench");
  const auto plan = plan_from_json_text(tiny_plan());
  const auto result = run_benchmark(plan, 2, dir.path());
  REQUIRE(result.traces.size() == 16);
  for (const auto &t : result.traces) {
    CHECK(t.completed);
    const auto &inst = t.instance_id == "twins" ? plan.instances[0].instance
                                                : plan.instances[1].instance;
    CHECK(t.distinct_count() ==
          static_cast<std::int64_t>(enumerate_feasible(inst).size()));
  }
  for (std::size_t k = 1; k < result.traces.size(); ++k) {
    const auto &a = result.traces[k - 1];
    const auto &b = result.traces[k];
    CHECK(std::tie(a.instance_id, a.strategy, a.run_index) <
          std::tie(b.instance_id, b.strategy, b.run_index));
  }
  CHECK(std::filesystem::exists(dir / "summary.csv"));
  CHECK(std::filesystem::exists(dir / "fit_means.csv"));
  CHECK(std::filesystem::exists(dir / "metadata.json"));
  CHECK(std::filesystem::exists(dir / "instances/trio.json"));
  CHECK(std::filesystem::exists(dir / "traces/trio__walk__run1.csv"));
  CHECK(std::filesystem::exists(dir / "traces/trio__walk__run1.json"));
  CHECK(std::filesystem::exists(dir / "curves/trio__anneal__run0.csv"));
  CHECK(std::filesystem::exists(dir / "bands/walk.csv"));

  // Summary iteration counts equal the trace lengths, and each completed
  // curve ends exactly at iterations / denominator.
  for (const auto &row : result.report.rows) {
    const auto it = std::find_if(result.traces.begin(), result.traces.end(),
                                 [&](const SampleTrace &t) {
                                   return t.instance_id == row.instance_id &&
                                          t.strategy == row.strategy &&
                                          t.run_index == row.run;
                                 });
    REQUIRE(it != result.traces.end());
    CHECK(row.iterations == it->iterations());
    std::vector<SampleTrace> group;
    for (const auto &t : result.traces) {
      if (t.instance_id == row.instance_id) {
        group.push_back(t);
      }
    }
    const auto denom = completion_denominator(group);
    const auto &curve = result.report.curves.at(trace_name(*it));
    CHECK(curve.points.back().x ==
          static_cast<double>(it->iterations()) / static_cast<double>(denom));
    CHECK(curve.points.back().y == 1.0);
  }

  // Reloading the written traces rebuilds the same summary.
  const auto reloaded = report_from_directory(dir.path(), false);
  CHECK(summary_csv(reloaded) == summary_csv(result.report));
}

TEST_CASE("benchmark output is independent of worker count") {
  testing::TempDir one("bench1");
  testing::TempDir four("bench4");
  const auto plan = plan_from_json_text(tiny_plan());
  run_benchmark(plan, 1, one.path());
  run_benchmark(plan, 4, four.path());
  for (const auto &entry : std::filesystem::recursive_directory_iterator(one.path())) {
    if (!entry.is_regular_file() || entry.path().filename() == "metadata.json") {
      continue;
    }
    const auto rel = std::filesystem::relative(entry.path(), one.path());
    REQUIRE(std::filesystem::exists(four.path() / rel));
    CHECK_MESSAGE(read_text_file(entry.path()) == read_text_file(four.path() / rel),
                  rel.string());
  }
}

TEST_CASE("budget truncation is flagged and the benchmark carries on") {
  testing::TempDir dir("budget");
  auto plan = plan_from_json_text(R"({
    "instances": [{"id": "big", "generate": {"n": 12, "capacity": 100, "dist": "uniform:1,100", "seed": 1}}],
    "strategies": ["walk", "anneal"],
    "runs_per_instance": 1,
    "budget_seconds": {"anneal": 0.001}
  })");
  const auto result = run_benchmark(plan, 1, dir.path());
  REQUIRE(result.traces.size() == 2);
  const auto &walk = result.traces[0];
  const auto &anneal = result.traces[1];
  CHECK(walk.strategy == Strategy::walk);
  CHECK(walk.completed);
  CHECK(anneal.strategy == Strategy::anneal);
  CHECK_FALSE(anneal.completed);
  CHECK(anneal.truncation == Truncation::budget);
  const auto summary = summary_csv(result.report);
  CHECK(summary.find("big,anneal,0,false,,") != std::string::npos);
}

TEST_CASE("summary table columns") {
  testing::TempDir dir("summary");
  const auto result = run_benchmark(plan_from_json_text(tiny_plan()), 1, dir.path());
  const auto text = summary_csv(result.report);
  CHECK(text.rfind("instance_id,strategy,run,completed,iterations_to_complete,"
                   "oracle_size,switch_iteration,fit_model,fit_params,fit_rmsd\n",
                   0) == 0);
  CHECK(text.find("twins,walk,0,true,") != std::string::npos);
}
