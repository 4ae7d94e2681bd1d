#include "bppsample/curves.hpp"

#include <algorithm>
#include <stdexcept>

namespace bppsample {

double NormalizedCurve::value_at(double x) const {
  if (points.empty()) {
    return 0.0;
  }
  if (x <= points.front().x) {
    return points.front().y;
  }
  if (x >= points.back().x) {
    return points.back().y;
  }
  const auto upper = std::upper_bound(
      points.begin(), points.end(), x,
      [](double v, const CurvePoint &p) { return v < p.x; });
  const CurvePoint &hi = *upper;
  const CurvePoint &lo = *(upper - 1);
  if (hi.x == lo.x) {
    return hi.y;
  }
  return lo.y + (hi.y - lo.y) * (x - lo.x) / (hi.x - lo.x);
}

std::int64_t completion_denominator(std::span<const SampleTrace> traces) {
  std::int64_t denominator = 0;
  for (const SampleTrace &t : traces) {
    if (t.completed) {
      denominator = std::max(denominator, t.iterations());
    }
  }
  if (denominator == 0) {
    throw std::runtime_error(
        "no trace completed on this instance, so the iteration denominator is "
        "undefined; rerun with a larger max_iters");
  }
  return denominator;
}

NormalizedCurve normalize_trace(const SampleTrace &trace,
                                std::int64_t denominator) {
  if (denominator < 1 || trace.oracle_size < 1) {
    throw ValidationError("normalization needs a positive denominator and "
                          "oracle size");
  }
  NormalizedCurve curve;
  curve.completed = trace.completed;
  curve.points.reserve(trace.entries.size() + 1);
  curve.points.push_back({0.0, 0.0});
  const auto d = static_cast<double>(denominator);
  const auto f = static_cast<double>(trace.oracle_size);
  for (const TraceEntry &e : trace.entries) {
    if (e.iteration > denominator) {
      break;
    }
    curve.points.push_back({static_cast<double>(e.iteration) / d,
                            static_cast<double>(e.distinct_count) / f});
  }
  return curve;
}

std::vector<NormalizedCurve>
normalize_curves(std::span<const SampleTrace> traces) {
  if (traces.empty()) {
    throw ValidationError("no traces to normalize");
  }
  const std::int64_t denominator = completion_denominator(traces);
  std::vector<NormalizedCurve> curves;
  curves.reserve(traces.size());
  for (const SampleTrace &t : traces) {
    curves.push_back(normalize_trace(t, denominator));
  }
  return curves;
}

FitResult fit_curve(const NormalizedCurve &curve, FitModel model) {
  return fit_points(curve.points, model);
}

double percentile(std::vector<double> values, double p) {
  if (values.empty()) {
    throw ValidationError("percentile of an empty sample");
  }
  std::sort(values.begin(), values.end());
  const double pos = p * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(pos);
  if (lo + 1 >= values.size()) {
    return values.back();
  }
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[lo + 1] - values[lo]);
}

PercentileBand percentile_band(std::span<const NormalizedCurve> curves,
                               std::span<const double> grid) {
  if (grid.empty()) {
    throw ValidationError("percentile grid must not be empty");
  }
  if (curves.size() < 2) {
    throw ValidationError("percentile band needs at least two curves");
  }
  PercentileBand band;
  band.grid.assign(grid.begin(), grid.end());
  std::vector<double> column(curves.size());
  for (double x : grid) {
    double total = 0.0;
    for (std::size_t i = 0; i < curves.size(); ++i) {
      column[i] = curves[i].value_at(x);
      total += column[i];
    }
    band.p16.push_back(percentile(column, 0.16));
    band.p84.push_back(percentile(column, 0.84));
    band.mean.push_back(total / static_cast<double>(curves.size()));
  }
  return band;
}

std::vector<double> uniform_grid(int count) {
  if (count < 2) {
    throw ValidationError("grid needs at least two points");
  }
  std::vector<double> grid(count);
  for (int k = 0; k < count; ++k) {
    grid[k] = static_cast<double>(k) / (count - 1);
  }
  return grid;
}

} // namespace bppsample
