#include "bppsample/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <ctime>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "bppsample/trace_io.hpp"
#include "json.hpp"

namespace bppsample {

using nlohmann::json;

namespace {

constexpr Weight kSuiteCapacity = 100;

std::uint64_t fnv1a(const std::string &text) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

int strategy_rank(Strategy s) { return static_cast<int>(s); }

bool trace_less(const SampleTrace &l, const SampleTrace &r) {
  if (l.instance_id != r.instance_id) {
    return l.instance_id < r.instance_id;
  }
  if (l.strategy != r.strategy) {
    return strategy_rank(l.strategy) < strategy_rank(r.strategy);
  }
  return l.run_index < r.run_index;
}

} // namespace

std::vector<NamedInstance> default_suite(int packages) {
  struct Family {
    const char *tag;
    WeightDistribution dist;
  };
  const Family families[] = {
      {"u", UniformWeights{1, kSuiteCapacity}},
      {"m", UniformWeights{10, kSuiteCapacity / 2}},
      {"g", NormalWeights{25.0, 10.0}},
  };
  const std::uint64_t seeds[] = {101, 202, 303};
  std::vector<NamedInstance> suite;
  for (const Family &family : families) {
    for (int k = 0; k < 3; ++k) {
      const std::uint64_t seed = seeds[k] + static_cast<std::uint64_t>(packages);
      std::ostringstream id;
      id << "n" << packages << "_" << family.tag << k + 1;
      suite.push_back({id.str(), generate_instance(packages, kSuiteCapacity,
                                                   family.dist, seed)});
    }
  }
  return suite;
}

std::vector<NamedInstance> default_suite() {
  auto suite = default_suite(10);
  auto larger = default_suite(12);
  suite.insert(suite.end(), larger.begin(), larger.end());
  return suite;
}

FitModel default_model(Strategy s) {
  switch (s) {
  case Strategy::random:
    return FitModel::f1;
  case Strategy::walk:
  case Strategy::hybrid:
    return FitModel::f2;
  case Strategy::anneal:
    return FitModel::f3;
  }
  return FitModel::f3;
}

void BenchmarkPlan::validate() const {
  if (instances.empty()) {
    throw ValidationError("plan has no instances");
  }
  if (strategies.empty()) {
    throw ValidationError("plan has no strategies");
  }
  if (runs_per_instance < 1) {
    throw ValidationError("runs_per_instance must be at least 1");
  }
  if (!seeds.empty() && static_cast<int>(seeds.size()) < runs_per_instance) {
    throw ValidationError("explicit seed list is shorter than "
                          "runs_per_instance");
  }
  for (const auto &[s, iters] : max_iters) {
    if (iters < 1) {
      throw ValidationError("max_iters must be at least 1");
    }
  }
  for (const auto &[s, seconds] : budget_seconds) {
    if (!(seconds >= 0.0)) {
      throw ValidationError("budget_seconds must be non-negative");
    }
  }
  std::vector<std::string> ids;
  for (const auto &named : instances) {
    ids.push_back(named.id);
  }
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
    throw ValidationError("instance ids must be unique");
  }
  if (grid_points < 2) {
    throw ValidationError("grid_points must be at least 2");
  }
  switch_policy.validate();
}

std::int64_t BenchmarkPlan::max_iters_for(Strategy s) const {
  const auto it = max_iters.find(s);
  return it == max_iters.end() ? 1'000'000 : it->second;
}

std::optional<double> BenchmarkPlan::budget_for(Strategy s) const {
  const auto it = budget_seconds.find(s);
  if (it == budget_seconds.end()) {
    return std::nullopt;
  }
  return it->second;
}

std::uint64_t BenchmarkPlan::seed_for(const std::string &instance_id,
                                      int run) const {
  if (!seeds.empty()) {
    return seeds.at(static_cast<std::size_t>(run));
  }
  return derive_seed(derive_seed(base_seed, fnv1a(instance_id)),
                     static_cast<std::uint64_t>(run));
}

namespace {

template <class T>
std::map<Strategy, T> per_strategy(const json &value, const char *key) {
  std::map<Strategy, T> out;
  if (value.is_number()) {
    for (Strategy s : {Strategy::random, Strategy::walk, Strategy::anneal,
                       Strategy::hybrid}) {
      out[s] = value.template get<T>();
    }
  } else if (value.is_object()) {
    for (const auto &[name, v] : value.items()) {
      if (!v.is_number()) {
        throw ValidationError(std::string(key) + " values must be numbers");
      }
      out[parse_strategy(name)] = v.template get<T>();
    }
  } else if (!value.is_null()) {
    throw ValidationError(std::string(key) +
                          " must be a number or a per-strategy object");
  }
  return out;
}

NamedInstance instance_entry(const json &entry,
                             const std::filesystem::path &base_dir) {
  if (!entry.is_object() || !entry.contains("id") ||
      !entry["id"].is_string()) {
    throw ValidationError("each plan instance needs a string 'id'");
  }
  const std::string id = entry["id"].get<std::string>();
  if (id.empty() || id.find_first_of("/\\") != std::string::npos ||
      id.find("__") != std::string::npos) {
    throw ValidationError("instance id '" + id + "' is not a valid file stem");
  }
  if (entry.contains("path")) {
    std::filesystem::path path = entry["path"].get<std::string>();
    if (path.is_relative()) {
      path = base_dir / path;
    }
    return {id, load_instance(path)};
  }
  if (entry.contains("generate")) {
    const json &g = entry["generate"];
    return {id, generate_instance(
                    g.at("n").get<int>(), g.at("capacity").get<Weight>(),
                    parse_distribution(g.at("dist").get<std::string>()),
                    g.at("seed").get<std::uint64_t>())};
  }
  json body = entry;
  body.erase("id");
  return {id, instance_from_json_text(body.dump())};
}

} // namespace

BenchmarkPlan plan_from_json_text(const std::string &text,
                                  const std::filesystem::path &base_dir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error &e) {
    throw ValidationError(std::string("malformed plan: ") + e.what());
  }
  if (!doc.is_object()) {
    throw ValidationError("plan must be a JSON object");
  }
  BenchmarkPlan plan;
  try {
    for (const auto &[key, value] : doc.items()) {
      if (key == "instances") {
        if (value.is_string()) {
          const auto name = value.get<std::string>();
          if (name == "default") {
            plan.instances = default_suite();
          } else if (name == "default-n10") {
            plan.instances = default_suite(10);
          } else if (name == "default-n12") {
            plan.instances = default_suite(12);
          } else {
            throw ValidationError("unknown instance suite '" + name + "'");
          }
        } else if (value.is_array()) {
          for (const auto &entry : value) {
            plan.instances.push_back(instance_entry(entry, base_dir));
          }
        } else {
          throw ValidationError("instances must be a suite name or a list");
        }
      } else if (key == "strategies") {
        plan.strategies.clear();
        for (const auto &s : value) {
          plan.strategies.push_back(parse_strategy(s.get<std::string>()));
        }
      } else if (key == "runs_per_instance") {
        plan.runs_per_instance = value.get<int>();
      } else if (key == "base_seed") {
        plan.base_seed = value.get<std::uint64_t>();
      } else if (key == "seeds") {
        plan.seeds = value.get<std::vector<std::uint64_t>>();
      } else if (key == "max_iters") {
        plan.max_iters = per_strategy<std::int64_t>(value, "max_iters");
      } else if (key == "budget_seconds") {
        plan.budget_seconds = per_strategy<double>(value, "budget_seconds");
      } else if (key == "anneal_config") {
        if (!value.is_object()) {
          throw ValidationError("anneal_config must be an object");
        }
        plan.anneal_config_json = value.dump();
      } else if (key == "switch_policy") {
        plan.switch_policy = switch_policy_from_json_text(value.dump());
      } else if (key == "include_incomplete") {
        plan.include_incomplete = value.get<bool>();
      } else if (key == "grid_points") {
        plan.grid_points = value.get<int>();
      } else {
        throw ValidationError("unknown plan key '" + key + "'");
      }
    }
  } catch (const json::exception &e) {
    throw ValidationError(std::string("bad plan value: ") + e.what());
  }
  // Check the anneal overrides against every instance up front.
  for (const auto &named : plan.instances) {
    anneal_config_from_json_text(plan.anneal_config_json, named.instance);
  }
  plan.validate();
  return plan;
}

SampleTrace run_strategy(const Instance &inst, Strategy strategy,
                         const AnnealConfig &config,
                         const SwitchPolicy &policy, std::uint64_t seed,
                         std::int64_t oracle_size, const RunLimits &limits,
                         const std::string &instance_id,
                         const AnnealObserver &observer) {
  switch (strategy) {
  case Strategy::random:
  case Strategy::walk:
    return run_until_complete(inst, strategy, seed, oracle_size, limits,
                              instance_id);
  case Strategy::anneal:
    return run_anneal(inst, config, seed, oracle_size, limits, instance_id,
                      observer);
  case Strategy::hybrid:
    return hybrid_run(inst, config, policy, seed, oracle_size, limits,
                      instance_id, observer);
  }
  throw ValidationError("unknown strategy");
}

std::string trace_name(const SampleTrace &trace) {
  return trace.instance_id + "__" + to_string(trace.strategy) + "__run" +
         std::to_string(trace.run_index);
}

BenchmarkReport summarize(std::vector<SampleTrace> traces,
                          bool include_incomplete, int grid_points) {
  std::sort(traces.begin(), traces.end(), trace_less);
  BenchmarkReport report;
  std::map<Strategy, std::vector<NormalizedCurve>> by_strategy;
  std::map<Strategy, std::vector<std::vector<double>>> params_by_strategy;

  std::size_t begin = 0;
  while (begin < traces.size()) {
    std::size_t end = begin;
    while (end < traces.size() &&
           traces[end].instance_id == traces[begin].instance_id) {
      ++end;
    }
    std::span<const SampleTrace> group(traces.data() + begin, end - begin);
    std::vector<NormalizedCurve> curves;
    try {
      curves = normalize_curves(group);
    } catch (const std::runtime_error &e) {
      throw std::runtime_error("instance " + group.front().instance_id + ": " +
                               e.what());
    }
    for (std::size_t i = 0; i < group.size(); ++i) {
      const SampleTrace &t = group[i];
      SummaryRow row;
      row.instance_id = t.instance_id;
      row.strategy = t.strategy;
      row.run = t.run_index;
      row.completed = t.completed;
      row.iterations = t.iterations();
      row.oracle_size = t.oracle_size;
      row.switch_iteration = t.switch_iteration;
      const FitModel model = default_model(t.strategy);
      const std::size_t needed =
          std::max<std::size_t>(3, static_cast<std::size_t>(arity(model)) + 1);
      if ((t.completed || include_incomplete) &&
          curves[i].points.size() >= needed) {
        row.fit = fit_curve(curves[i], model);
        params_by_strategy[t.strategy].push_back(row.fit->params);
      }
      report.rows.push_back(row);
      by_strategy[t.strategy].push_back(curves[i]);
      report.curves[trace_name(t)] = curves[i];
    }
    begin = end;
  }

  for (const auto &[strategy, list] : params_by_strategy) {
    FitMean mean;
    mean.strategy = strategy;
    mean.model = default_model(strategy);
    mean.runs = static_cast<int>(list.size());
    mean.params.assign(list.front().size(), 0.0);
    for (const auto &p : list) {
      for (std::size_t k = 0; k < p.size(); ++k) {
        mean.params[k] += p[k] / static_cast<double>(list.size());
      }
    }
    report.fit_means.push_back(mean);
  }

  const auto grid = uniform_grid(grid_points);
  for (const auto &[strategy, curves] : by_strategy) {
    if (curves.size() >= 2) {
      report.bands[strategy] = percentile_band(curves, grid);
    }
  }
  return report;
}

namespace {

std::string join_params(const std::vector<double> &params) {
  std::string out;
  for (std::size_t k = 0; k < params.size(); ++k) {
    if (k) {
      out += ';';
    }
    out += format_double(params[k]);
  }
  return out;
}

} // namespace

std::string summary_csv(const BenchmarkReport &report) {
  std::ostringstream out;
  out << "instance_id,strategy,run,completed,iterations_to_complete,"
         "oracle_size,switch_iteration,fit_model,fit_params,fit_rmsd\n";
  for (const SummaryRow &row : report.rows) {
    out << row.instance_id << ',' << to_string(row.strategy) << ',' << row.run
        << ',' << (row.completed ? "true" : "false") << ',';
    if (row.completed) {
      out << row.iterations;
    }
    out << ',' << row.oracle_size << ',';
    if (row.switch_iteration) {
      out << *row.switch_iteration;
    }
    out << ',';
    if (row.fit) {
      out << to_string(row.fit->model) << ',' << join_params(row.fit->params)
          << ',' << format_double(row.fit->rmsd);
    } else {
      out << ",,";
    }
    out << '\n';
  }
  return out.str();
}

std::string fit_means_csv(const BenchmarkReport &report) {
  std::ostringstream out;
  out << "strategy,fit_model,runs,mean_params\n";
  for (const FitMean &m : report.fit_means) {
    out << to_string(m.strategy) << ',' << to_string(m.model) << ',' << m.runs
        << ',' << join_params(m.params) << '\n';
  }
  return out.str();
}

std::string band_csv(const PercentileBand &band) {
  std::ostringstream out;
  out << "x,p16,p84,mean\n";
  for (std::size_t k = 0; k < band.grid.size(); ++k) {
    out << format_double(band.grid[k]) << ',' << format_double(band.p16[k])
        << ',' << format_double(band.p84[k]) << ','
        << format_double(band.mean[k]) << '\n';
  }
  return out.str();
}

void write_report(const BenchmarkReport &report,
                  const std::filesystem::path &out_dir) {
  write_text_file(out_dir / "summary.csv", summary_csv(report));
  write_text_file(out_dir / "fit_means.csv", fit_means_csv(report));
  for (const auto &[name, curve] : report.curves) {
    std::ostringstream csv;
    write_curve_csv(curve, csv);
    write_text_file(out_dir / "curves" / (name + ".csv"), csv.str());
  }
  for (const auto &[strategy, band] : report.bands) {
    write_text_file(out_dir / "bands" / (to_string(strategy) + ".csv"),
                    band_csv(band));
  }
}

BenchmarkResult run_benchmark(const BenchmarkPlan &plan, int workers,
                              const std::filesystem::path &out_dir) {
  plan.validate();
  if (workers < 1) {
    throw ValidationError("workers must be at least 1");
  }
  using Clock = std::chrono::system_clock;
  const auto started = Clock::now();

  struct Cell {
    std::size_t instance;
    Strategy strategy;
    int run;
  };
  std::vector<Cell> cells;
  for (std::size_t i = 0; i < plan.instances.size(); ++i) {
    for (Strategy s : plan.strategies) {
      for (int r = 0; r < plan.runs_per_instance; ++r) {
        cells.push_back({i, s, r});
      }
    }
  }

  std::vector<std::int64_t> oracle_sizes;
  std::vector<AnnealConfig> configs;
  for (const auto &named : plan.instances) {
    oracle_sizes.push_back(
        static_cast<std::int64_t>(enumerate_feasible(named.instance).size()));
    configs.push_back(
        anneal_config_from_json_text(plan.anneal_config_json, named.instance));
  }

  std::vector<SampleTrace> traces(cells.size());
  std::vector<double> seconds(cells.size(), 0.0);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= cells.size()) {
        return;
      }
      const Cell &cell = cells[k];
      const NamedInstance &named = plan.instances[cell.instance];
      try {
        RunLimits limits;
        limits.max_iters = plan.max_iters_for(cell.strategy);
        if (const auto budget = plan.budget_for(cell.strategy)) {
          limits.budget = std::chrono::duration<double>(*budget);
        }
        const auto t0 = std::chrono::steady_clock::now();
        traces[k] = run_strategy(named.instance, cell.strategy,
                                 configs[cell.instance], plan.switch_policy,
                                 plan.seed_for(named.id, cell.run),
                                 oracle_sizes[cell.instance], limits, named.id);
        traces[k].run_index = cell.run;
        seconds[k] = std::chrono::duration<double>(
                         std::chrono::steady_clock::now() - t0)
                         .count();
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) {
          failure = std::current_exception();
        }
        next.store(cells.size());
      }
    }
  };

  const int threads =
      std::min<int>(workers, static_cast<int>(std::max<std::size_t>(1, cells.size())));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back(worker);
    }
    for (auto &th : pool) {
      th.join();
    }
  }
  if (failure) {
    std::rethrow_exception(failure);
  }

  std::filesystem::create_directories(out_dir / "instances");
  for (const auto &named : plan.instances) {
    save_instance(named.instance, out_dir / "instances" / (named.id + ".json"));
  }
  json timing = json::array();
  for (std::size_t k = 0; k < cells.size(); ++k) {
    save_trace(traces[k], out_dir / "traces" / trace_name(traces[k]));
    timing.push_back({{"trace", trace_name(traces[k])},
                      {"seconds", seconds[k]}});
  }

  const auto finished = Clock::now();
  json meta;
  meta["started_unix"] = std::chrono::duration_cast<std::chrono::seconds>(
                             started.time_since_epoch())
                             .count();
  meta["finished_unix"] = std::chrono::duration_cast<std::chrono::seconds>(
                              finished.time_since_epoch())
                              .count();
  meta["workers"] = workers;
  meta["cells"] = timing;
  write_text_file(out_dir / "metadata.json", meta.dump(2) + "\n");

  BenchmarkResult result;
  result.traces = traces;
  std::sort(result.traces.begin(), result.traces.end(), trace_less);
  result.report =
      summarize(result.traces, plan.include_incomplete, plan.grid_points);
  write_report(result.report, out_dir);
  return result;
}

BenchmarkReport report_from_directory(const std::filesystem::path &in_dir,
                                      bool include_incomplete,
                                      int grid_points) {
  const auto dir = in_dir / "traces";
  if (!std::filesystem::is_directory(dir)) {
    throw ValidationError("no traces directory under " + in_dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto &entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() == ".csv") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<SampleTrace> traces;
  for (const auto &f : files) {
    traces.push_back(load_trace(f));
  }
  if (traces.empty()) {
    throw ValidationError("no traces found under " + dir.string());
  }
  return summarize(std::move(traces), include_incomplete, grid_points);
}

} // namespace bppsample
