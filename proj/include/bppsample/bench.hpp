#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bppsample/annealer.hpp"
#include "bppsample/curves.hpp"
#include "bppsample/fit.hpp"
#include "bppsample/hybrid.hpp"
#include "bppsample/instance.hpp"
#include "bppsample/sampling.hpp"

namespace bppsample {

struct NamedInstance {
  std::string id;
  Instance instance;
};

/// Regenerated benchmark suite: 9 instances each of 10 and 12 packages,
/// capacity 100, three weight distributions times three fixed seeds.
std::vector<NamedInstance> default_suite();
std::vector<NamedInstance> default_suite(int packages);

/// Fit model the benchmark applies to each strategy's discovery curve.
FitModel default_model(Strategy s);

struct BenchmarkPlan {
  std::vector<NamedInstance> instances;
  std::vector<Strategy> strategies{Strategy::random, Strategy::walk,
                                   Strategy::anneal, Strategy::hybrid};
  int runs_per_instance = 2;
  std::uint64_t base_seed = 20230517;
  /// When non-empty, run r uses seeds[r] on every instance.
  std::vector<std::uint64_t> seeds;
  std::map<Strategy, std::int64_t> max_iters;
  std::map<Strategy, double> budget_seconds;
  /// Anneal config overrides in the config-file JSON format, resolved per
  /// instance.
  std::string anneal_config_json = "{}";
  SwitchPolicy switch_policy;
  bool include_incomplete = false;
  int grid_points = 101;

  void validate() const;
  std::int64_t max_iters_for(Strategy s) const;
  std::optional<double> budget_for(Strategy s) const;
  std::uint64_t seed_for(const std::string &instance_id, int run) const;
};

/// Parses a plan document. Relative instance paths resolve against
/// `base_dir`.
BenchmarkPlan plan_from_json_text(const std::string &text,
                                  const std::filesystem::path &base_dir = {});

/// Runs one strategy on one instance.
SampleTrace run_strategy(const Instance &inst, Strategy strategy,
                         const AnnealConfig &config,
                         const SwitchPolicy &policy, std::uint64_t seed,
                         std::int64_t oracle_size, const RunLimits &limits,
                         const std::string &instance_id = {},
                         const AnnealObserver &observer = {});

struct SummaryRow {
  std::string instance_id;
  Strategy strategy = Strategy::random;
  int run = 0;
  bool completed = false;
  std::int64_t iterations = 0;
  std::int64_t oracle_size = 0;
  std::optional<std::int64_t> switch_iteration;
  std::optional<FitResult> fit;
};

struct FitMean {
  Strategy strategy = Strategy::random;
  FitModel model = FitModel::f1;
  int runs = 0;
  std::vector<double> params;
};

struct BenchmarkReport {
  std::vector<SummaryRow> rows;
  std::vector<FitMean> fit_means;
  std::map<std::string, NormalizedCurve> curves; // by trace name
  std::map<Strategy, PercentileBand> bands;
};

/// Normalizes, fits and aggregates a set of traces. Output order depends
/// only on the traces, never on the order they are passed in.
BenchmarkReport summarize(std::vector<SampleTrace> traces,
                          bool include_incomplete, int grid_points = 101);

std::string summary_csv(const BenchmarkReport &report);
std::string fit_means_csv(const BenchmarkReport &report);
std::string band_csv(const PercentileBand &band);

/// `<instance_id>__<strategy>__run<r>`
std::string trace_name(const SampleTrace &trace);

/// Writes the report files (summary, fit means, curves, bands) to `out_dir`.
void write_report(const BenchmarkReport &report,
                  const std::filesystem::path &out_dir);

struct BenchmarkResult {
  std::vector<SampleTrace> traces; // sorted by instance, strategy, run
  BenchmarkReport report;
};

/**
 * Executes every (instance, strategy, run) cell on up to `workers` threads,
 * then writes traces, curves, fits and the summary under `out_dir`.
 * Wall-clock data goes to `metadata.json` only.
 */
BenchmarkResult run_benchmark(const BenchmarkPlan &plan, int workers,
                              const std::filesystem::path &out_dir);

/// Reloads every trace under `<in_dir>/traces` and rebuilds the report.
BenchmarkReport report_from_directory(const std::filesystem::path &in_dir,
                                      bool include_incomplete,
                                      int grid_points = 101);

} // namespace bppsample
