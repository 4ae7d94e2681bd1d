#pragma once

#include <array>
#include <cstdint>

namespace bppsample {

/// SplitMix64 step. Advances `state` and returns the mixed output.
std::uint64_t splitmix64(std::uint64_t &state);

/// Derives an independent seed for a named stream of a run.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/**
 * xoshiro256** generator, seeded through SplitMix64.
 *
 * All draws used by the samplers go through this class so that a seed gives
 * the same sequence on every platform. The standard library distributions are
 * implementation-defined and are deliberately not used.
 */
class Xoshiro256 {
public:
  explicit Xoshiro256(std::uint64_t seed = 0);

  std::uint64_t next();

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01();

  /// Uniform integer in [0, bound). `bound` must be positive.
  std::uint64_t below(std::uint64_t bound);

  /// Uniform integer in [0, 2^k), 0 <= k <= 64.
  std::uint64_t bits(unsigned k);

  /// Standard normal draw (Box-Muller, one value per call).
  double normal();

  bool operator==(const Xoshiro256 &) const = default;

private:
  std::array<std::uint64_t, 4> s_{};
};

} // namespace bppsample
