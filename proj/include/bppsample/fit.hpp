#pragma once

#include <span>
#include <string>
#include <vector>

#include "bppsample/hybrid.hpp"

namespace bppsample {

/// Discovery-curve models on normalized iterations x in [0, 1]:
///   f1(x, a)    = 1 - 2^(-a x) + x 2^(-a),  a > 0
///   f2(x, a, b) = 1 - 2^(-a x) + x 2^(-b)
///   f3(x, a)    = a x
/// plus `linear_origin`, the closed-form least-squares line through 0.
enum class FitModel { linear_origin, f1, f2, f3 };

std::string to_string(FitModel m);
FitModel parse_fit_model(const std::string &text);
int arity(FitModel m);

double eval_f1(double x, double a);
double eval_f2(double x, double a, double b);
double eval_f3(double x, double a);
double eval_model(FitModel m, std::span<const double> params, double x);

struct FitResult {
  FitModel model = FitModel::linear_origin;
  std::vector<double> params;
  double rmsd = 0.0;
  bool converged = false;
};

/**
 * Least-squares fit of `model` to the points.
 *
 * One-parameter models use golden-section search on a bracket grown from
 * each start a in {0.5, 2, 8}; f2 uses a downhill simplex from the 3x3 grid
 * of (a, b) starts. f1 and f2 search over log(a) so a stays positive. The
 * best start wins.
 */
FitResult fit_points(std::span<const CurvePoint> points, FitModel model);

/// Minimizers, exposed for testing.
struct Minimum1D {
  double arg = 0.0;
  double value = 0.0;
  bool converged = false;
};

template <class F>
Minimum1D golden_section(F &&f, double start, double step, double tol,
                         int max_expansions = 200, int max_iters = 500);

struct MinimumND {
  std::vector<double> arg;
  double value = 0.0;
  bool converged = false;
};

template <class F>
MinimumND nelder_mead(F &&f, std::vector<double> start, double step,
                      double tol, int max_evals = 20000);

} // namespace bppsample

#include "bppsample/fit_impl.hpp"
