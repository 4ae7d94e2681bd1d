#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "bppsample/fit.hpp"
#include "bppsample/sampling.hpp"

namespace bppsample {

/// Discovery curve on x = iterations / denominator, y = distinct / oracle.
struct NormalizedCurve {
  std::vector<CurvePoint> points; // starts at (0, 0)
  bool completed = false;

  /// Linear interpolation; flat beyond the last point.
  double value_at(double x) const;
};

/**
 * Normalizes every trace of one instance by the largest completion iteration
 * among the completed traces. Incomplete traces share that denominator and
 * are cut at x = 1.
 */
std::vector<NormalizedCurve> normalize_curves(std::span<const SampleTrace> traces);

/// Largest completion iteration among completed traces.
std::int64_t completion_denominator(std::span<const SampleTrace> traces);

NormalizedCurve normalize_trace(const SampleTrace &trace,
                                std::int64_t denominator);

FitResult fit_curve(const NormalizedCurve &curve, FitModel model);

/// Linear-interpolated percentile between order statistics: position
/// p * (N - 1) in the sorted sample.
double percentile(std::vector<double> values, double p);

struct PercentileBand {
  std::vector<double> grid;
  std::vector<double> p16;
  std::vector<double> p84;
  std::vector<double> mean;
};

PercentileBand percentile_band(std::span<const NormalizedCurve> curves,
                               std::span<const double> grid);

/// `count` evenly spaced points covering [0, 1].
std::vector<double> uniform_grid(int count);

} // namespace bppsample
