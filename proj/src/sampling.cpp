#include "bppsample/sampling.hpp"

namespace bppsample {

std::string to_string(Strategy s) {
  switch (s) {
  case Strategy::random:
    return "random";
  case Strategy::walk:
    return "walk";
  case Strategy::anneal:
    return "anneal";
  case Strategy::hybrid:
    return "hybrid";
  }
  return "unknown";
}

Strategy parse_strategy(const std::string &text) {
  if (text == "random") {
    return Strategy::random;
  }
  if (text == "walk") {
    return Strategy::walk;
  }
  if (text == "anneal") {
    return Strategy::anneal;
  }
  if (text == "hybrid") {
    return Strategy::hybrid;
  }
  throw ValidationError("unknown strategy '" + text + "'");
}

std::string to_string(Truncation t) {
  switch (t) {
  case Truncation::none:
    return "none";
  case Truncation::max_iters:
    return "max_iters";
  case Truncation::budget:
    return "budget";
  }
  return "unknown";
}

Truncation parse_truncation(const std::string &text) {
  if (text == "none") {
    return Truncation::none;
  }
  if (text == "max_iters") {
    return Truncation::max_iters;
  }
  if (text == "budget") {
    return Truncation::budget;
  }
  throw ValidationError("unknown truncation '" + text + "'");
}

PackageSubset random_step(const Instance &inst, SamplerState &state) {
  return PackageSubset{
      static_cast<std::uint32_t>(state.rng.bits(inst.size()))};
}

void record_step(SampleTrace &trace, SamplerState &state, const Instance &inst,
                 PackageSubset candidate) {
  TraceEntry entry;
  entry.iteration = trace.iterations() + 1;
  entry.candidate = candidate;
  entry.is_new =
      is_feasible_partial(inst, candidate) && state.found.insert(candidate);
  entry.distinct_count = trace.distinct_count() + (entry.is_new ? 1 : 0);
  trace.entries.push_back(entry);
}

void check_run_preconditions(const RunLimits &limits,
                             std::int64_t oracle_size) {
  if (limits.max_iters < 1) {
    throw ValidationError("max_iters must be at least 1");
  }
  if (oracle_size < 1) {
    throw ValidationError("oracle size must be at least 1");
  }
  if (limits.budget && limits.budget->count() < 0.0) {
    throw ValidationError("budget must be non-negative");
  }
}

void drive(SampleTrace &trace, SamplerState &state, const Instance &inst,
           const StepFunction &step, const RunLimits &limits) {
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  while (trace.distinct_count() < trace.oracle_size) {
    if (trace.iterations() >= limits.max_iters) {
      trace.truncation = Truncation::max_iters;
      break;
    }
    if (limits.budget && Clock::now() - start >= *limits.budget) {
      trace.truncation = Truncation::budget;
      break;
    }
    record_step(trace, state, inst, step(state));
  }
  trace.completed = trace.distinct_count() >= trace.oracle_size;
  if (trace.completed) {
    trace.truncation = Truncation::none;
  }
}

SampleTrace run_until_complete(const Instance &inst, Strategy strategy,
                               std::uint64_t seed, std::int64_t oracle_size,
                               const RunLimits &limits,
                               std::string instance_id) {
  check_run_preconditions(limits, oracle_size);
  SampleTrace trace;
  trace.strategy = strategy;
  trace.seed = seed;
  trace.instance_id = std::move(instance_id);
  trace.oracle_size = oracle_size;

  switch (strategy) {
  case Strategy::random: {
    SamplerState state(derive_seed(seed, std::uint64_t(Stream::random)));
    drive(trace, state, inst,
          [&](SamplerState &s) { return random_step(inst, s); }, limits);
    break;
  }
  case Strategy::walk: {
    SamplerState state(derive_seed(seed, std::uint64_t(Stream::walk)));
    drive(trace, state, inst,
          [&](SamplerState &s) { return walk_step(inst, s); }, limits);
    break;
  }
  default:
    throw ValidationError("run_until_complete handles random and walk; use "
                          "the annealer or hybrid runner for " +
                          to_string(strategy));
  }
  return trace;
}

namespace {

using boost::multiprecision::cpp_int;

cpp_int pow2(std::int64_t e) { return cpp_int(1) << static_cast<unsigned>(e); }

void check_sizes(int n, std::int64_t feasible_size) {
  if (n < 1 || n > 62) {
    throw ValidationError("package count out of range");
  }
  if (feasible_size < 0 || feasible_size > (std::int64_t{1} << n)) {
    throw ValidationError("feasible set size must lie in [0, 2^n]");
  }
}

} // namespace

Rational prob_new_random(int n, std::int64_t feasible_size,
                         std::int64_t found) {
  check_sizes(n, feasible_size);
  if (found < 0 || found > feasible_size) {
    throw ValidationError("found count must lie in [0, feasible set size]");
  }
  return Rational(cpp_int(feasible_size - found), pow2(n));
}

Rational prob_complete_bound(int n, std::int64_t feasible_size,
                             std::int64_t draws) {
  check_sizes(n, feasible_size);
  if (draws < feasible_size) {
    throw ValidationError("bound needs at least as many draws as feasible "
                          "subsets");
  }
  cpp_int numerator =
      boost::multiprecision::pow(pow2(n) - feasible_size,
                                 static_cast<unsigned>(draws - feasible_size));
  for (std::int64_t k = 2; k <= feasible_size; ++k) {
    numerator *= k;
  }
  return Rational(numerator, pow2(static_cast<std::int64_t>(n) * draws));
}

} // namespace bppsample
