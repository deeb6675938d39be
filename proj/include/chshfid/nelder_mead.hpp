#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numeric>

namespace chshfid {

struct NelderMeadOptions {
  double initial_step = 0.5;
  double value_spread_tol = 1e-10;  // stop when max f - min f over the simplex falls below this
  std::size_t max_evaluations = 2000;
};

template <std::size_t N>
struct NelderMeadResult {
  std::array<double, N> x;
  double value;
  std::size_t evaluations;
  bool converged;
};

/// Minimizes f from x0 with the standard reflection/expansion/contraction/shrink
/// coefficients (1, 2, 1/2, 1/2). Axis-aligned initial simplex of edge initial_step.
template <std::size_t N, class F>
NelderMeadResult<N> nelder_mead(F&& f, const std::array<double, N>& x0, const NelderMeadOptions& opt = {}) {
  using Point = std::array<double, N>;
  std::array<Point, N + 1> x;
  std::array<double, N + 1> fx;
  std::size_t evals = 0;
  auto eval = [&](const Point& p) {
    ++evals;
    return f(p);
  };

  x[0] = x0;
  fx[0] = eval(x0);
  for (std::size_t i = 0; i < N; ++i) {
    x[i + 1] = x0;
    x[i + 1][i] += opt.initial_step;
    fx[i + 1] = eval(x[i + 1]);
  }

  std::array<std::size_t, N + 1> order;
  bool converged = false;
  while (true) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fx[a] < fx[b]; });
    const std::size_t best = order[0];
    const std::size_t worst = order[N];
    const std::size_t second_worst = order[N - 1];
    if (fx[worst] - fx[best] < opt.value_spread_tol) {
      converged = true;
      break;
    }
    if (evals >= opt.max_evaluations) break;

    Point centroid{};
    for (std::size_t v = 0; v <= N; ++v) {
      if (v == worst) continue;
      for (std::size_t i = 0; i < N; ++i) centroid[i] += x[v][i];
    }
    for (double& c : centroid) c /= static_cast<double>(N);

    auto along = [&](double t) {
      Point p;
      for (std::size_t i = 0; i < N; ++i) p[i] = centroid[i] + t * (x[worst][i] - centroid[i]);
      return p;
    };

    const Point reflected = along(-1.0);
    const double fr = eval(reflected);
    if (fr < fx[best]) {
      const Point expanded = along(-2.0);
      const double fe = eval(expanded);
      if (fe < fr) {
        x[worst] = expanded;
        fx[worst] = fe;
      } else {
        x[worst] = reflected;
        fx[worst] = fr;
      }
      continue;
    }
    if (fr < fx[second_worst]) {
      x[worst] = reflected;
      fx[worst] = fr;
      continue;
    }
    const bool outside = fr < fx[worst];
    const Point contracted = along(outside ? -0.5 : 0.5);
    const double fc = eval(contracted);
    if (fc < (outside ? fr : fx[worst])) {
      x[worst] = contracted;
      fx[worst] = fc;
      continue;
    }
    for (std::size_t v = 0; v <= N; ++v) {
      if (v == best) continue;
      for (std::size_t i = 0; i < N; ++i) x[v][i] = x[best][i] + 0.5 * (x[v][i] - x[best][i]);
      fx[v] = eval(x[v]);
    }
  }

  const std::size_t best = static_cast<std::size_t>(std::min_element(fx.begin(), fx.end()) - fx.begin());
  return {x[best], fx[best], evals, converged};
}

}  // namespace chshfid
