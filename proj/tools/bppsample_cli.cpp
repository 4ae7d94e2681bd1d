// Command-line front end: instance generation, oracle enumeration, single
// sampler runs, benchmarks, curve fits and summary reports.
//
// Exit codes: 0 success, 2 validation error, 3 runtime or budget error.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "bppsample/annealer.hpp"
#include "bppsample/bench.hpp"
#include "bppsample/curves.hpp"
#include "bppsample/fit.hpp"
#include "bppsample/hybrid.hpp"
#include "bppsample/instance.hpp"
#include "bppsample/sampling.hpp"
#include "bppsample/trace_io.hpp"

namespace fs = std::filesystem;
using namespace bppsample;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitRuntime = 3;

void write_hamiltonian_csv(const AnnealProbe &probe, std::ostream &out) {
  out << "mask_hex,bare,penalized\n";
  for (std::size_t k = 0; k < probe.bare->energies.size(); ++k) {
    out << mask_hex(PackageSubset{static_cast<std::uint32_t>(k)}) << ','
        << format_double(probe.bare->energies[k]) << ','
        << format_double(probe.penalized->energies[k]) << '\n';
  }
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Feasible partial solution samplers for 1D bin packing"};
  app.require_subcommand(1);

  // generate
  auto *generate = app.add_subcommand("generate", "Generate a random instance");
  int gen_n = 0;
  Weight gen_capacity = 0;
  std::string gen_dist;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  generate->add_option("--n", gen_n, "Number of packages")->required();
  generate->add_option("--capacity", gen_capacity, "Container capacity")
      ->required();
  generate->add_option("--dist", gen_dist, "uniform:lo,hi or normal:mu,sigma")
      ->required();
  generate->add_option("--seed", gen_seed, "Generator seed")->required();
  generate->add_option("--out", gen_out, "Instance JSON path")->required();

  // enumerate
  auto *enumerate = app.add_subcommand("enumerate",
                                       "Write every feasible partial solution");
  std::string enum_instance;
  std::string enum_out;
  enumerate->add_option("--instance", enum_instance)->required();
  enumerate->add_option("--out", enum_out, "CSV path")->required();

  // sample
  auto *sample = app.add_subcommand("sample", "Run one sampler");
  std::string sample_instance;
  std::string sample_strategy;
  std::uint64_t sample_seed = 0;
  std::int64_t sample_max_iters = 0;
  std::string sample_anneal_config;
  std::string sample_switch_policy;
  std::string sample_out;
  std::string sample_id;
  std::optional<double> sample_budget;
  std::string dump_dir;
  int dump_limit = 1;
  sample->add_option("--instance", sample_instance)->required();
  sample->add_option("--strategy", sample_strategy,
                     "random|walk|anneal|hybrid")
      ->required();
  sample->add_option("--seed", sample_seed)->required();
  sample->add_option("--max-iters", sample_max_iters)->required();
  sample->add_option("--anneal-config", sample_anneal_config,
                     "Anneal config JSON file");
  sample->add_option("--switch-policy", sample_switch_policy,
                     "Switch policy JSON file");
  sample->add_option("--out", sample_out,
                     "Trace CSV path; metadata goes next to it as .json")
      ->required();
  sample->add_option("--instance-id", sample_id,
                     "Defaults to the instance file stem");
  sample->add_option("--budget", sample_budget, "Wall-clock budget, seconds");
  sample->add_option("--dump-dir", dump_dir,
                     "Write statevector and Hamiltonian dumps of anneal calls");
  sample->add_option("--dump-limit", dump_limit,
                     "Number of anneal calls to dump");

  // bench
  auto *bench = app.add_subcommand("bench", "Run a benchmark plan");
  std::string bench_plan;
  std::string bench_out;
  int bench_workers = 1;
  bench->add_option("--plan", bench_plan)->required();
  bench->add_option("--out-dir", bench_out)->required();
  bench->add_option("--workers", bench_workers)->check(CLI::PositiveNumber);

  // fit
  auto *fit = app.add_subcommand("fit", "Fit a model to one trace");
  std::string fit_trace;
  std::string fit_model;
  std::string fit_out;
  std::optional<std::int64_t> fit_denominator;
  fit->add_option("--trace", fit_trace, "Trace CSV with its .json sidecar")
      ->required();
  fit->add_option("--model", fit_model, "f1|f2|f3|linear")->required();
  fit->add_option("--out", fit_out)->required();
  fit->add_option("--denominator", fit_denominator,
                  "Iteration count mapped to x = 1 (default: the trace's "
                  "own completion)");

  // report
  auto *report = app.add_subcommand("report", "Summarize a bench directory");
  std::string report_in;
  std::string report_out;
  bool report_incomplete = false;
  report->add_option("--in-dir", report_in)->required();
  report->add_option("--out", report_out)->required();
  report->add_flag("--include-incomplete", report_incomplete,
                   "Fit truncated traces too");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (*generate) {
      const Instance inst = generate_instance(
          gen_n, gen_capacity, parse_distribution(gen_dist), gen_seed);
      save_instance(inst, gen_out);
    } else if (*enumerate) {
      const Instance inst = load_instance(enum_instance);
      std::ostringstream csv;
      write_feasible_csv(inst, enumerate_feasible(inst), csv);
      write_text_file(enum_out, csv.str());
    } else if (*sample) {
      const Instance inst = load_instance(sample_instance);
      const Strategy strategy = parse_strategy(sample_strategy);
      const AnnealConfig config =
          sample_anneal_config.empty()
              ? AnnealConfig::defaults_for(inst)
              : anneal_config_from_json_text(
                    read_text_file(sample_anneal_config), inst);
      const SwitchPolicy policy =
          sample_switch_policy.empty()
              ? SwitchPolicy{}
              : switch_policy_from_json_text(
                    read_text_file(sample_switch_policy));
      RunLimits limits;
      limits.max_iters = sample_max_iters;
      if (sample_budget) {
        limits.budget = std::chrono::duration<double>(*sample_budget);
      }
      const std::string id = sample_id.empty()
                                 ? fs::path(sample_instance).stem().string()
                                 : sample_id;
      AnnealObserver observer;
      if (!dump_dir.empty()) {
        observer = [&](const AnnealProbe &probe) {
          if (probe.call_index >= dump_limit) {
            return;
          }
          const std::string suffix = std::to_string(probe.call_index);
          std::ostringstream psi;
          write_statevector_csv(*probe.state, psi);
          write_text_file(fs::path(dump_dir) / ("statevector_" + suffix +
                                                ".csv"),
                          psi.str());
          std::ostringstream ham;
          write_hamiltonian_csv(probe, ham);
          write_text_file(fs::path(dump_dir) / ("hamiltonian_" + suffix +
                                                ".csv"),
                          ham.str());
        };
      }
      const auto oracle =
          static_cast<std::int64_t>(enumerate_feasible(inst).size());
      const SampleTrace trace = run_strategy(inst, strategy, config, policy,
                                             sample_seed, oracle, limits, id,
                                             observer);
      fs::path stem = sample_out;
      stem.replace_extension();
      save_trace(trace, stem);
      std::cout << to_string(strategy) << ": " << trace.distinct_count() << '/'
                << oracle << " after " << trace.iterations() << " iterations"
                << (trace.completed ? "" : " (" + to_string(trace.truncation) +
                                               ")")
                << '\n';
    } else if (*bench) {
      const BenchmarkPlan plan = plan_from_json_text(
          read_text_file(bench_plan), fs::path(bench_plan).parent_path());
      const BenchmarkResult result =
          run_benchmark(plan, bench_workers, bench_out);
      int truncated = 0;
      for (const auto &t : result.traces) {
        truncated += t.completed ? 0 : 1;
      }
      std::cout << result.traces.size() << " runs, " << truncated
                << " truncated; summary in "
                << (fs::path(bench_out) / "summary.csv").string() << '\n';
    } else if (*fit) {
      const SampleTrace trace = load_trace(fit_trace);
      std::int64_t denominator = 0;
      if (fit_denominator) {
        denominator = *fit_denominator;
      } else {
        const SampleTrace one[] = {trace};
        denominator = completion_denominator(one);
      }
      const NormalizedCurve curve = normalize_trace(trace, denominator);
      const FitResult result = fit_curve(curve, parse_fit_model(fit_model));
      std::ostringstream csv;
      csv << "model,params,rmsd,converged\n" << to_string(result.model) << ',';
      for (std::size_t k = 0; k < result.params.size(); ++k) {
        csv << (k ? ";" : "") << format_double(result.params[k]);
      }
      csv << ',' << format_double(result.rmsd) << ','
          << (result.converged ? "true" : "false") << '\n';
      write_text_file(fit_out, csv.str());
    } else if (*report) {
      const BenchmarkReport rep =
          report_from_directory(report_in, report_incomplete);
      write_text_file(report_out, summary_csv(rep));
    }
  } catch (const ValidationError &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
