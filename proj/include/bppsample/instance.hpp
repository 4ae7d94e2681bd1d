#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <set>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "bppsample/errors.hpp"

namespace bppsample {

using Weight = std::int64_t;

/// Default ceiling on the number of packages. Both the oracle scan and the
/// statevector hold 2^n entries.
inline constexpr int kDefaultMaxPackages = 24;

/// Configuration of a single container: bit i set means package i is inside.
struct PackageSubset {
  std::uint32_t mask = 0;

  constexpr bool contains(int package) const {
    return ((mask >> package) & 1u) != 0;
  }
  int size() const;
  bool empty() const { return mask == 0; }

  auto operator<=>(const PackageSubset &) const = default;
};

/// One-dimensional bin packing instance: positive integer weights, each no
/// heavier than the container capacity.
class Instance {
public:
  Instance(std::vector<Weight> weights, Weight capacity,
           int max_packages = kDefaultMaxPackages);

  int size() const { return static_cast<int>(weights_.size()); }
  Weight capacity() const { return capacity_; }
  std::span<const Weight> weights() const { return weights_; }
  Weight weight(int package) const { return weights_.at(package); }
  Weight total_weight() const;
  Weight min_weight() const;

  /// 2^n, the number of distinct masks.
  std::uint64_t subset_count() const { return std::uint64_t{1} << size(); }

  bool operator==(const Instance &) const = default;

private:
  std::vector<Weight> weights_;
  Weight capacity_;
};

enum class SetSource { oracle, sampled };

/// Ordered, duplicate-free collection of feasible partial solutions.
class FeasibleSet {
public:
  using const_iterator = std::set<PackageSubset>::const_iterator;

  explicit FeasibleSet(SetSource source = SetSource::sampled)
      : source_(source) {}

  /// Returns true if `s` was not present before.
  bool insert(PackageSubset s) { return members_.insert(s).second; }
  bool contains(PackageSubset s) const { return members_.contains(s); }
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  SetSource source() const { return source_; }

  const_iterator begin() const { return members_.begin(); }
  const_iterator end() const { return members_.end(); }

  bool operator==(const FeasibleSet &other) const {
    return members_ == other.members_;
  }

private:
  std::set<PackageSubset> members_;
  SetSource source_;
};

/// Sum of the weights of the packages in `s`.
Weight subset_weight(const Instance &inst, PackageSubset s);

/// Non-empty and within capacity.
bool is_feasible_partial(const Instance &inst, PackageSubset s);

/// Brute-force scan over all 2^n masks.
FeasibleSet enumerate_feasible(const Instance &inst);

struct UniformWeights {
  Weight lo;
  Weight hi;
};

/// Normal(mean, stddev) rounded to the nearest integer; draws outside
/// [1, capacity] are redrawn.
struct NormalWeights {
  double mean;
  double stddev;
};

using WeightDistribution = std::variant<UniformWeights, NormalWeights>;

/// Parses `uniform:lo,hi` or `normal:mu,sigma`.
WeightDistribution parse_distribution(const std::string &text);
std::string to_string(const WeightDistribution &dist);

/// Deterministic in all of its arguments.
Instance generate_instance(int n, Weight capacity,
                           const WeightDistribution &dist, std::uint64_t seed);

Instance load_instance(const std::filesystem::path &path);
void save_instance(const Instance &inst, const std::filesystem::path &path);

/// Parses the JSON instance document (`capacity`, `weights`; nothing else).
Instance instance_from_json_text(const std::string &text);
std::string instance_to_json_text(const Instance &inst);

/// Writes `mask_hex,weight` rows in ascending mask order.
void write_feasible_csv(const Instance &inst, const FeasibleSet &set,
                        std::ostream &out);

/// Lowercase `0x`-prefixed hex.
std::string mask_hex(PackageSubset s);
PackageSubset parse_mask_hex(const std::string &text);

} // namespace bppsample
