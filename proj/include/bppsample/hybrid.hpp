#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bppsample/annealer.hpp"
#include "bppsample/sampling.hpp"

namespace bppsample {

struct CurvePoint {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const CurvePoint &) const = default;
};

/// Least-squares slope of y = a*x: sum(xy) / sum(x^2).
double fit_through_origin(std::span<const CurvePoint> points);

/// Root-mean-square deviation of the points from y = a*x.
double rmsd(std::span<const CurvePoint> points, double a);

/// When the walk phase of a hybrid run hands over to the annealer.
struct SwitchPolicy {
  std::int64_t min_iterations = 100;
  double slope_threshold = 0.25;
  double rmsd_threshold = 2.0; // may be +inf to disable the switch
  std::optional<std::int64_t> fit_window;

  void validate() const;

  bool operator==(const SwitchPolicy &) const = default;
};

/// Reads `min_iterations, slope_threshold, rmsd_threshold, fit_window`;
/// absent keys keep their defaults. `rmsd_threshold` may be "inf".
SwitchPolicy switch_policy_from_json_text(const std::string &text);

/**
 * Incremental evaluation of the switch rule over a growing discovery curve
 * (x = iteration, y = distinct count).
 *
 * The walk counts as efficient while a > slope_threshold or
 * RMSD < rmsd_threshold; the switch fires when neither holds.
 */
class SwitchMonitor {
public:
  explicit SwitchMonitor(SwitchPolicy policy);

  void push(std::int64_t iteration, std::int64_t distinct_count);
  bool should_switch() const;

  std::int64_t size() const { return static_cast<std::int64_t>(points_.size()); }
  double slope() const;
  double window_rmsd() const;

private:
  std::span<const CurvePoint> window() const;

  SwitchPolicy policy_;
  std::vector<CurvePoint> points_;
  // Exact integer sums over the window.
  __int128 sum_xy_ = 0;
  __int128 sum_xx_ = 0;
};

bool should_switch(const SampleTrace &trace, const SwitchPolicy &policy);

/**
 * Random walk until the switch rule fires, then annealing with every
 * solution found so far penalized. `switch_iteration` is the number of walk
 * iterations performed; later entries are anneal calls.
 */
SampleTrace hybrid_run(const Instance &inst, const AnnealConfig &config,
                       const SwitchPolicy &policy, std::uint64_t seed,
                       std::int64_t oracle_size, const RunLimits &limits,
                       std::string instance_id = {},
                       const AnnealObserver &observer = {});

} // namespace bppsample
