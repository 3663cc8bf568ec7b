#pragma once

// Derivative-free simplex-reflection minimizer (Nelder-Mead) with the
// standard coefficients: reflection 1, expansion 2, contraction 1/2,
// shrink 1/2. The budget counts objective evaluations, not iterations.

#include <algorithm>
#include <functional>
#include <vector>

namespace locqubo {

struct NelderMeadResult {
  std::vector<double> x;
  double fx = 0.0;
  int evaluations = 0;
  std::vector<double> trace;  // best objective seen after each evaluation
};

inline NelderMeadResult nelder_mead(
    const std::function<double(const std::vector<double>&)>& f,
    const std::vector<double>& x0, int max_evals, double tol,
    double initial_step = 0.25) {
  const std::size_t n = x0.size();
  NelderMeadResult res;
  res.x = x0;
  if (max_evals <= 0) {  // no budget: report the start point unevaluated
    res.fx = 0.0;
    return res;
  }
  auto eval = [&](const std::vector<double>& x) {
    const double v = f(x);
    ++res.evaluations;
    if (res.trace.empty() || v < res.trace.back())
      res.trace.push_back(v);
    else
      res.trace.push_back(res.trace.back());
    return v;
  };

  std::vector<std::vector<double>> pts(n + 1, x0);
  std::vector<double> fv(n + 1);
  fv[0] = eval(pts[0]);
  for (std::size_t i = 1; i <= n && res.evaluations < max_evals; ++i) {
    pts[i][i - 1] += initial_step;
    fv[i] = eval(pts[i]);
  }
  const std::size_t live = static_cast<std::size_t>(res.evaluations);
  std::vector<std::size_t> order(live);
  for (std::size_t i = 0; i < live; ++i) order[i] = i;

  auto sort_simplex = [&]() {
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
  };
  sort_simplex();

  while (res.evaluations < max_evals && live == n + 1) {
    if (fv[order.back()] - fv[order.front()] < tol) break;
    // centroid of all but the worst vertex
    std::vector<double> centroid(n, 0.0);
    for (std::size_t i = 0; i + 1 < order.size(); ++i)
      for (std::size_t d = 0; d < n; ++d)
        centroid[d] += pts[order[i]][d] / static_cast<double>(n);
    const std::size_t worst = order.back();
    auto blend = [&](double coef) {
      std::vector<double> p(n);
      for (std::size_t d = 0; d < n; ++d)
        p[d] = centroid[d] + coef * (centroid[d] - pts[worst][d]);
      return p;
    };
    auto reflected = blend(1.0);
    const double fr = eval(reflected);
    if (fr < fv[order.front()]) {
      if (res.evaluations < max_evals) {
        auto expanded = blend(2.0);
        const double fe = eval(expanded);
        if (fe < fr) {
          pts[worst] = std::move(expanded);
          fv[worst] = fe;
        } else {
          pts[worst] = std::move(reflected);
          fv[worst] = fr;
        }
      } else {
        pts[worst] = std::move(reflected);
        fv[worst] = fr;
      }
    } else if (fr < fv[order[order.size() - 2]]) {
      pts[worst] = std::move(reflected);
      fv[worst] = fr;
    } else if (res.evaluations < max_evals) {
      const bool outside = fr < fv[worst];
      auto contracted = blend(outside ? 0.5 : -0.5);
      const double fc = eval(contracted);
      if (fc < std::min(fr, fv[worst])) {
        pts[worst] = std::move(contracted);
        fv[worst] = fc;
      } else {  // shrink every vertex toward the best one
        for (std::size_t i = 1;
             i < order.size() && res.evaluations < max_evals; ++i) {
          auto& p = pts[order[i]];
          for (std::size_t d = 0; d < n; ++d)
            p[d] = pts[order[0]][d] + 0.5 * (p[d] - pts[order[0]][d]);
          fv[order[i]] = eval(p);
        }
      }
    }
    sort_simplex();
  }

  sort_simplex();
  res.x = pts[order.front()];
  res.fx = fv[order.front()];
  return res;
}

}  // namespace locqubo
