#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "bppsample/instance.hpp"
#include "bppsample/rng.hpp"

namespace bppsample {

enum class Strategy { random, walk, anneal, hybrid };

std::string to_string(Strategy s);
Strategy parse_strategy(const std::string &text);

/// RNG stream identifiers; a run seed is split into one generator per stream.
enum class Stream : std::uint64_t { random = 1, walk = 2, anneal = 3 };

/// Why a run stopped before covering the oracle set.
enum class Truncation { none, max_iters, budget };

std::string to_string(Truncation t);
Truncation parse_truncation(const std::string &text);

struct TraceEntry {
  std::int64_t iteration = 0; // 1-based
  PackageSubset candidate;
  bool is_new = false;
  std::int64_t distinct_count = 0;

  bool operator==(const TraceEntry &) const = default;
};

/// Discovery record of one sampler run.
struct SampleTrace {
  Strategy strategy = Strategy::random;
  std::uint64_t seed = 0;
  std::string instance_id;
  int run_index = 0;
  std::optional<std::int64_t> switch_iteration;
  std::int64_t oracle_size = 0;
  bool completed = false;
  Truncation truncation = Truncation::none;
  std::vector<TraceEntry> entries;

  std::int64_t iterations() const {
    return static_cast<std::int64_t>(entries.size());
  }
  std::int64_t distinct_count() const {
    return entries.empty() ? 0 : entries.back().distinct_count;
  }

  bool operator==(const SampleTrace &) const = default;
};

struct SamplerState {
  FeasibleSet found{SetSource::sampled};
  Xoshiro256 rng;

  SamplerState() = default;
  explicit SamplerState(std::uint64_t seed) : rng(seed) {}
};

/// Uniform mask in [0, 2^n).
PackageSubset random_step(const Instance &inst, SamplerState &state);

/**
 * One iteration of the random-walk heuristic.
 *
 * Starts from a uniformly chosen package, then repeatedly drops every
 * remaining package that would overflow the container and either stops with
 * probability 1/(|left| + 1) or adds a uniformly chosen remaining package.
 * Every returned subset is a non-empty feasible partial solution.
 *
 * `Rng` needs `below(n)` (uniform index in [0, n)) and `uniform01()`.
 */
template <class Rng>
PackageSubset walk_step(const Instance &inst, Rng &rng) {
  const int n = inst.size();
  const int first = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
  std::uint32_t mask = 1u << first;
  Weight weight = inst.weight(first);

  std::vector<int> left;
  left.reserve(n);
  for (int i = 0; i < n; ++i) {
    if (i != first) {
      left.push_back(i);
    }
  }

  while (!left.empty()) {
    std::erase_if(left, [&](int i) {
      return weight + inst.weight(i) > inst.capacity();
    });
    if (left.empty()) {
      break; // the stop draw would succeed with certainty
    }
    const double stop = 1.0 / static_cast<double>(left.size() + 1);
    if (rng.uniform01() < stop) {
      break;
    }
    const auto pick = static_cast<std::size_t>(rng.below(left.size()));
    const int package = left[pick];
    left.erase(left.begin() + static_cast<std::ptrdiff_t>(pick));
    mask |= 1u << package;
    weight += inst.weight(package);
  }
  return PackageSubset{mask};
}

inline PackageSubset walk_step(const Instance &inst, SamplerState &state) {
  return walk_step(inst, state.rng);
}

/// Appends one trace entry; new iff feasible and not previously found.
void record_step(SampleTrace &trace, SamplerState &state, const Instance &inst,
                 PackageSubset candidate);

struct RunLimits {
  std::int64_t max_iters = 1'000'000;
  /// Wall-clock budget; unset means unlimited.
  std::optional<std::chrono::duration<double>> budget;
};

using StepFunction = std::function<PackageSubset(SamplerState &)>;

/**
 * Drives `step` until the distinct count reaches `trace.oracle_size` or a
 * limit is hit. Sets `completed` and `truncation` on the trace.
 */
void drive(SampleTrace &trace, SamplerState &state, const Instance &inst,
           const StepFunction &step, const RunLimits &limits);

void check_run_preconditions(const RunLimits &limits, std::int64_t oracle_size);

/// Random sampling or random walk run from `seed`.
SampleTrace run_until_complete(const Instance &inst, Strategy strategy,
                               std::uint64_t seed, std::int64_t oracle_size,
                               const RunLimits &limits,
                               std::string instance_id = {});

using Rational = boost::multiprecision::cpp_rational;

/// Probability that one uniform draw yields a not-yet-found feasible subset
/// after `found` of `feasible_size` have been collected.
Rational prob_new_random(int n, std::int64_t feasible_size, std::int64_t found);

/// Lower bound on the probability that `draws` uniform draws cover every
/// feasible subset. Requires draws >= feasible_size.
Rational prob_complete_bound(int n, std::int64_t feasible_size,
                             std::int64_t draws);

} // namespace bppsample
