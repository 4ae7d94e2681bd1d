#include "bppsample/fit.hpp"

#include <algorithm>
#include <cmath>

namespace bppsample {

std::string to_string(FitModel m) {
  switch (m) {
  case FitModel::linear_origin:
    return "linear";
  case FitModel::f1:
    return "f1";
  case FitModel::f2:
    return "f2";
  case FitModel::f3:
    return "f3";
  }
  return "unknown";
}

FitModel parse_fit_model(const std::string &text) {
  if (text == "linear" || text == "linear_origin") {
    return FitModel::linear_origin;
  }
  if (text == "f1") {
    return FitModel::f1;
  }
  if (text == "f2") {
    return FitModel::f2;
  }
  if (text == "f3") {
    return FitModel::f3;
  }
  throw ValidationError("unknown fit model '" + text + "'");
}

int arity(FitModel m) { return m == FitModel::f2 ? 2 : 1; }

double eval_f1(double x, double a) {
  return 1.0 - std::exp2(-a * x) + x * std::exp2(-a);
}

double eval_f2(double x, double a, double b) {
  return 1.0 - std::exp2(-a * x) + x * std::exp2(-b);
}

double eval_f3(double x, double a) { return a * x; }

double eval_model(FitModel m, std::span<const double> params, double x) {
  switch (m) {
  case FitModel::f1:
    return eval_f1(x, params[0]);
  case FitModel::f2:
    return eval_f2(x, params[0], params[1]);
  case FitModel::linear_origin:
  case FitModel::f3:
    return eval_f3(x, params[0]);
  }
  return 0.0;
}

namespace {

constexpr double kParamTol = 1e-8;
constexpr double kStarts[] = {0.5, 2.0, 8.0};
// Floor on log(a) so a stays representable and strictly positive.
constexpr double kMinLogRate = -30.0;

double rate(double u) { return std::exp(std::max(u, kMinLogRate)); }

double sse(std::span<const CurvePoint> points, FitModel m,
           std::span<const double> params) {
  double total = 0.0;
  for (const CurvePoint &p : points) {
    const double r = p.y - eval_model(m, params, p.x);
    total += r * r;
  }
  return total;
}

} // namespace

FitResult fit_points(std::span<const CurvePoint> points, FitModel model) {
  const std::size_t needed =
      std::max<std::size_t>(3, static_cast<std::size_t>(arity(model)) + 1);
  if (points.size() < needed) {
    throw ValidationError("fit needs at least " + std::to_string(needed) +
                          " points, got " + std::to_string(points.size()));
  }

  FitResult result;
  result.model = model;
  const auto n = static_cast<double>(points.size());

  switch (model) {
  case FitModel::linear_origin: {
    result.params = {fit_through_origin(points)};
    result.converged = true;
    break;
  }
  case FitModel::f1:
  case FitModel::f3: {
    const bool log_space = model == FitModel::f1;
    auto objective = [&](double u) {
      const double a[] = {log_space ? rate(u) : u};
      return sse(points, model, a);
    };
    Minimum1D best{0.0, INFINITY, false};
    for (double a0 : kStarts) {
      const double u0 = log_space ? std::log(a0) : a0;
      const Minimum1D m = golden_section(objective, u0, 0.1, kParamTol);
      if (m.value < best.value) {
        best = m;
      }
    }
    result.params = {log_space ? rate(best.arg) : best.arg};
    result.converged = best.converged;
    break;
  }
  case FitModel::f2: {
    auto objective = [&](const std::vector<double> &p) {
      const double params[] = {rate(p[0]), p[1]};
      return sse(points, model, params);
    };
    MinimumND best{{}, INFINITY, false};
    for (double a0 : kStarts) {
      for (double b0 : kStarts) {
        MinimumND m =
            nelder_mead(objective, {std::log(a0), b0}, 0.5, kParamTol);
        // One restart from the optimum guards against a collapsed simplex.
        m = nelder_mead(objective, m.arg, 0.05, kParamTol);
        if (m.value < best.value) {
          best = m;
        }
      }
    }
    result.params = {rate(best.arg[0]), best.arg[1]};
    result.converged = best.converged;
    break;
  }
  }
  result.rmsd = std::sqrt(sse(points, model, result.params) / n);
  return result;
}

} // namespace bppsample
