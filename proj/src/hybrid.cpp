#include "bppsample/hybrid.hpp"

#include <cmath>
#include <limits>

#include "json.hpp"

namespace bppsample {

using nlohmann::json;

double fit_through_origin(std::span<const CurvePoint> points) {
  if (points.empty()) {
    throw ValidationError("cannot fit an empty point set");
  }
  double sxy = 0.0;
  double sxx = 0.0;
  for (const CurvePoint &p : points) {
    sxy += p.x * p.y;
    sxx += p.x * p.x;
  }
  if (sxx == 0.0) {
    throw ValidationError("cannot fit through the origin when every x is 0");
  }
  return sxy / sxx;
}

double rmsd(std::span<const CurvePoint> points, double a) {
  if (points.empty()) {
    throw ValidationError("RMSD of an empty point set");
  }
  double total = 0.0;
  for (const CurvePoint &p : points) {
    const double r = p.y - a * p.x;
    total += r * r;
  }
  return std::sqrt(total / static_cast<double>(points.size()));
}

void SwitchPolicy::validate() const {
  if (min_iterations < 1) {
    throw ValidationError("min_iterations must be at least 1");
  }
  if (!(slope_threshold >= 0.0) || std::isinf(slope_threshold)) {
    throw ValidationError("slope_threshold must be finite and non-negative");
  }
  if (!(rmsd_threshold > 0.0)) {
    throw ValidationError("rmsd_threshold must be positive");
  }
  if (fit_window && *fit_window < 1) {
    throw ValidationError("fit_window must be at least 1");
  }
}

SwitchPolicy switch_policy_from_json_text(const std::string &text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error &e) {
    throw ValidationError(std::string("malformed switch policy: ") + e.what());
  }
  if (!doc.is_object()) {
    throw ValidationError("switch policy must be a JSON object");
  }
  SwitchPolicy policy;
  for (const auto &[key, value] : doc.items()) {
    if (key == "min_iterations" && value.is_number_integer()) {
      policy.min_iterations = value.get<std::int64_t>();
    } else if (key == "slope_threshold" && value.is_number()) {
      policy.slope_threshold = value.get<double>();
    } else if (key == "rmsd_threshold" && value.is_number()) {
      policy.rmsd_threshold = value.get<double>();
    } else if (key == "rmsd_threshold" && value == "inf") {
      policy.rmsd_threshold = std::numeric_limits<double>::infinity();
    } else if (key == "fit_window" && value.is_null()) {
      policy.fit_window.reset();
    } else if (key == "fit_window" && value.is_number_integer()) {
      policy.fit_window = value.get<std::int64_t>();
    } else {
      throw ValidationError("bad switch policy entry '" + key + "'");
    }
  }
  policy.validate();
  return policy;
}

SwitchMonitor::SwitchMonitor(SwitchPolicy policy) : policy_(policy) {
  policy_.validate();
}

void SwitchMonitor::push(std::int64_t iteration, std::int64_t distinct_count) {
  points_.push_back(CurvePoint{static_cast<double>(iteration),
                               static_cast<double>(distinct_count)});
  sum_xy_ += static_cast<__int128>(iteration) * distinct_count;
  sum_xx_ += static_cast<__int128>(iteration) * iteration;
  if (policy_.fit_window && size() > *policy_.fit_window) {
    const CurvePoint &gone = points_[points_.size() - 1 - *policy_.fit_window];
    const auto x = static_cast<std::int64_t>(gone.x);
    const auto y = static_cast<std::int64_t>(gone.y);
    sum_xy_ -= static_cast<__int128>(x) * y;
    sum_xx_ -= static_cast<__int128>(x) * x;
  }
}

std::span<const CurvePoint> SwitchMonitor::window() const {
  std::span<const CurvePoint> all(points_);
  if (policy_.fit_window && size() > *policy_.fit_window) {
    return all.last(static_cast<std::size_t>(*policy_.fit_window));
  }
  return all;
}

double SwitchMonitor::slope() const {
  if (sum_xx_ == 0) {
    throw ValidationError("slope of an empty window");
  }
  return static_cast<double>(sum_xy_) / static_cast<double>(sum_xx_);
}

double SwitchMonitor::window_rmsd() const { return rmsd(window(), slope()); }

bool SwitchMonitor::should_switch() const {
  if (size() < policy_.min_iterations) {
    return false;
  }
  const double a = slope();
  if (a > policy_.slope_threshold) {
    return false;
  }
  return !(window_rmsd() < policy_.rmsd_threshold);
}

bool should_switch(const SampleTrace &trace, const SwitchPolicy &policy) {
  SwitchMonitor monitor(policy);
  for (const TraceEntry &e : trace.entries) {
    monitor.push(e.iteration, e.distinct_count);
  }
  return monitor.should_switch();
}

SampleTrace hybrid_run(const Instance &inst, const AnnealConfig &config,
                       const SwitchPolicy &policy, std::uint64_t seed,
                       std::int64_t oracle_size, const RunLimits &limits,
                       std::string instance_id,
                       const AnnealObserver &observer) {
  check_run_preconditions(limits, oracle_size);
  config.validate();
  SampleTrace trace;
  trace.strategy = Strategy::hybrid;
  trace.seed = seed;
  trace.instance_id = std::move(instance_id);
  trace.oracle_size = oracle_size;

  SamplerState state(derive_seed(seed, std::uint64_t(Stream::walk)));
  SwitchMonitor monitor(policy);
  bool annealing = false;
  std::int64_t anneal_calls = 0;

  auto step = [&](SamplerState &s) {
    if (!annealing) {
      if (!trace.entries.empty()) {
        const TraceEntry &last = trace.entries.back();
        monitor.push(last.iteration, last.distinct_count);
      }
      if (monitor.should_switch()) {
        annealing = true;
        trace.switch_iteration = trace.iterations();
        s.rng = Xoshiro256(derive_seed(seed, std::uint64_t(Stream::anneal)));
      }
    }
    if (annealing) {
      return anneal_sample(inst, config, s, anneal_calls++, observer);
    }
    return walk_step(inst, s);
  };
  drive(trace, state, inst, step, limits);
  return trace;
}

} // namespace bppsample
