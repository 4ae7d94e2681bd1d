#include <sstream>

#include "doctest.h"
#include "temp_dir.hpp"

#include "bppsample/sampling.hpp"
#include "bppsample/trace_io.hpp"

using namespace bppsample;

TEST_CASE("trace CSV layout") {
  SampleTrace t;
  SamplerState state;
  const Instance inst({2, 3, 5}, 5);
  record_step(t, state, inst, PackageSubset{1});
  record_step(t, state, inst, PackageSubset{6});
  record_step(t, state, inst, PackageSubset{1});
  std::ostringstream out;
  write_trace_csv(t, out);
  CHECK(out.str() == "iteration,candidate_mask_hex,is_new,distinct_count\n"
                     "1,0x1,1,1\n2,0x6,0,1\n3,0x1,0,1\n");
}

TEST_CASE("trace files round trip with their sidecar") {
  testing::TempDir dir("trace");
  const Instance inst({5, 7, 9, 11}, 20);
  auto t = run_until_complete(inst, Strategy::walk, 12, 9, {}, "toy");
  t.run_index = 1;
  t.switch_iteration = 4;
  save_trace(t, dir / "toy__walk__run1");
  CHECK(std::filesystem::exists(dir / "toy__walk__run1.json"));
  const auto back = load_trace(dir / "toy__walk__run1.csv");
  CHECK(back == t);

  auto capped = run_until_complete(inst, Strategy::random, 3, 9, RunLimits{5, {}});
  save_trace(capped, dir / "capped");
  const auto again = load_trace(dir / "capped.csv");
  CHECK(again == capped);
  CHECK(again.truncation == Truncation::max_iters);
  CHECK_FALSE(again.switch_iteration.has_value());
}

TEST_CASE("metadata sidecar fields") {
  SampleTrace t;
  t.strategy = Strategy::hybrid;
  t.seed = 18446744073709551615ULL;
  t.instance_id = "n10_u1";
  t.oracle_size = 31;
  const auto text = trace_metadata_json(t);
  CHECK(text.find("\"strategy\": \"hybrid\"") != std::string::npos);
  CHECK(text.find("\"seed\": 18446744073709551615") != std::string::npos);
  CHECK(text.find("\"switch_iteration\": null") != std::string::npos);
  CHECK(text.find("\"completed\": false") != std::string::npos);
  CHECK(text.find("\"oracle_size\": 31") != std::string::npos);
}

TEST_CASE("malformed trace files are rejected") {
  SampleTrace t;
  std::istringstream bad_header("iter,mask\n");
  CHECK_THROWS_AS(read_trace_csv(bad_header, t), ValidationError);
  std::istringstream bad_row(
      "iteration,candidate_mask_hex,is_new,distinct_count\n1,0x1,yes,1\n");
  CHECK_THROWS_AS(read_trace_csv(bad_row, t), ValidationError);
  std::istringstream short_row(
      "iteration,candidate_mask_hex,is_new,distinct_count\n1,0x1\n");
  CHECK_THROWS_AS(read_trace_csv(short_row, t), ValidationError);
  CHECK_THROWS_AS(load_trace("/nonexistent/trace.csv"), ValidationError);
}

TEST_CASE("numbers print in shortest round-trip form") {
  CHECK(format_double(0.25) == "0.25");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(0.1) == "0.1");
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
  CHECK(format_double(INFINITY) == "inf");
}

TEST_CASE("curve CSV") {
  NormalizedCurve c;
  c.points = {{0, 0}, {0.5, 0.25}, {1, 1}};
  std::ostringstream out;
  write_curve_csv(c, out);
  CHECK(out.str() == "x,y\n0,0\n0.5,0.25\n1,1\n");
}
