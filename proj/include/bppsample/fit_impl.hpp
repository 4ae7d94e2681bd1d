#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

namespace bppsample {

template <class F>
Minimum1D golden_section(F &&f, double start, double step, double tol,
                         int max_expansions, int max_iters) {
  constexpr double kGrow = 1.618033988749895;
  constexpr double kInvPhi = 0.6180339887498949;

  // Bracket: walk downhill with growing steps until the value rises.
  double a = start;
  double b = start + step;
  double fa = f(a);
  double fb = f(b);
  if (fb > fa) {
    std::swap(a, b);
    std::swap(fa, fb);
  }
  double c = b + kGrow * (b - a);
  double fc = f(c);
  int expansions = 0;
  while (fc <= fb) {
    if (++expansions > max_expansions) {
      return Minimum1D{c, fc, false};
    }
    a = b;
    fa = fb;
    b = c;
    fb = fc;
    c = b + kGrow * (b - a);
    fc = f(c);
  }
  double lo = std::min(a, c);
  double hi = std::max(a, c);

  double x1 = hi - kInvPhi * (hi - lo);
  double x2 = lo + kInvPhi * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int it = 0; it < max_iters; ++it) {
    if (hi - lo <= tol * std::max(1.0, std::abs(lo) + std::abs(hi))) {
      break;
    }
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kInvPhi * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kInvPhi * (hi - lo);
      f2 = f(x2);
    }
  }
  const bool converged =
      hi - lo <= tol * std::max(1.0, std::abs(lo) + std::abs(hi));
  Minimum1D best{b, fb, converged};
  if (f1 < best.value) {
    best.arg = x1;
    best.value = f1;
  }
  if (f2 < best.value) {
    best.arg = x2;
    best.value = f2;
  }
  return best;
}

template <class F>
MinimumND nelder_mead(F &&f, std::vector<double> start, double step,
                      double tol, int max_evals) {
  const std::size_t dim = start.size();
  std::vector<std::vector<double>> simplex(dim + 1, start);
  for (std::size_t i = 0; i < dim; ++i) {
    simplex[i + 1][i] += step;
  }
  std::vector<double> values(dim + 1);
  int evals = 0;
  auto eval = [&](const std::vector<double> &p) {
    ++evals;
    return f(p);
  };
  for (std::size_t i = 0; i <= dim; ++i) {
    values[i] = eval(simplex[i]);
  }

  std::vector<std::size_t> order(dim + 1);
  auto diameter = [&] {
    double d = 0.0;
    for (std::size_t i = 1; i <= dim; ++i) {
      for (std::size_t j = 0; j < dim; ++j) {
        const double scale = std::max(1.0, std::abs(simplex[0][j]));
        d = std::max(d, std::abs(simplex[i][j] - simplex[0][j]) / scale);
      }
    }
    return d;
  };

  bool converged = false;
  while (evals < max_evals) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t l, std::size_t r) {
                       return values[l] < values[r];
                     });
    {
      auto s2 = simplex;
      auto v2 = values;
      for (std::size_t i = 0; i <= dim; ++i) {
        simplex[i] = s2[order[i]];
        values[i] = v2[order[i]];
      }
    }
    if (diameter() <= tol) {
      converged = true;
      break;
    }

    std::vector<double> centroid(dim, 0.0);
    for (std::size_t i = 0; i < dim; ++i) {
      for (std::size_t j = 0; j < dim; ++j) {
        centroid[j] += simplex[i][j] / static_cast<double>(dim);
      }
    }
    auto along = [&](double t) {
      std::vector<double> p(dim);
      for (std::size_t j = 0; j < dim; ++j) {
        p[j] = centroid[j] + t * (simplex[dim][j] - centroid[j]);
      }
      return p;
    };

    const auto reflected = along(-1.0);
    const double fr = eval(reflected);
    if (fr < values[0]) {
      const auto expanded = along(-2.0);
      const double fe = eval(expanded);
      if (fe < fr) {
        simplex[dim] = expanded;
        values[dim] = fe;
      } else {
        simplex[dim] = reflected;
        values[dim] = fr;
      }
    } else if (fr < values[dim - 1]) {
      simplex[dim] = reflected;
      values[dim] = fr;
    } else {
      const bool outside = fr < values[dim];
      const auto contracted = along(outside ? -0.5 : 0.5);
      const double fc = eval(contracted);
      if (fc < (outside ? fr : values[dim])) {
        simplex[dim] = contracted;
        values[dim] = fc;
      } else {
        for (std::size_t i = 1; i <= dim; ++i) {
          for (std::size_t j = 0; j < dim; ++j) {
            simplex[i][j] = simplex[0][j] + 0.5 * (simplex[i][j] - simplex[0][j]);
          }
          values[i] = eval(simplex[i]);
        }
      }
    }
  }
  const auto best = static_cast<std::size_t>(
      std::min_element(values.begin(), values.end()) - values.begin());
  return MinimumND{simplex[best], values[best], converged};
}

} // namespace bppsample
