#pragma once

// Continuous relaxations of the built models: exact LP relaxations of the
// assignment/facility programs, a box-constrained continuous minimizer for
// the QUBO itself, and construction/extraction of the lifted-matrix
// (semidefinite) relaxation data for external solvers.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "locqubo/instances.hpp"
#include "locqubo/qubo.hpp"
#include "locqubo/simplex.hpp"

namespace locqubo {

// ---------------------------------------------------------------------------
// LP relaxations (variable order matches the QUBO builders: x block, y block)
// ---------------------------------------------------------------------------

inline LinearProgram lp_relaxation(const ProblemInstance& inst,
                                   const std::string& formulation = "") {
  LinearProgram lp;
  if (const auto* pm = std::get_if<PMedianInstance>(&inst)) {
    pm->validate();
    const int n = pm->n;
    lp.n_vars = n * n + n;
    lp.objective.assign(static_cast<std::size_t>(lp.n_vars), 0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        lp.objective[static_cast<std::size_t>(i * n + j)] =
            Rational(pm->demand[j] * pm->cost[i][j]);
    for (int j = 0; j < n; ++j) {  // each client assigned exactly once
      std::vector<Rational> row(static_cast<std::size_t>(lp.n_vars), 0);
      for (int i = 0; i < n; ++i) row[static_cast<std::size_t>(i * n + j)] = 1;
      lp.eq_rows.push_back(std::move(row));
      lp.eq_rhs.push_back(1);
    }
    {  // exactly p facilities
      std::vector<Rational> row(static_cast<std::size_t>(lp.n_vars), 0);
      for (int i = 0; i < n; ++i) row[static_cast<std::size_t>(n * n + i)] = 1;
      lp.eq_rows.push_back(std::move(row));
      lp.eq_rhs.push_back(pm->p);
    }
    for (int i = 0; i < n; ++i)  // x_ij <= y_i
      for (int j = 0; j < n; ++j) {
        std::vector<Rational> row(static_cast<std::size_t>(lp.n_vars), 0);
        row[static_cast<std::size_t>(i * n + j)] = 1;
        row[static_cast<std::size_t>(n * n + i)] = -1;
        lp.le_rows.push_back(std::move(row));
        lp.le_rhs.push_back(0);
      }
    return lp;
  }
  if (const auto* fc = std::get_if<FcflpInstance>(&inst)) {
    fc->validate();
    const bool disagg = formulation == "disaggregated";
    if (!formulation.empty() && formulation != "aggregated" && !disagg)
      throw UnsupportedFamily("lp_relaxation: unknown formulation '" +
                              formulation + "'");
    const int n = fc->n;
    lp.n_vars = n * n + n;
    lp.objective.assign(static_cast<std::size_t>(lp.n_vars), 0);
    for (int i = 0; i < n; ++i) {
      lp.objective[static_cast<std::size_t>(n * n + i)] =
          Rational(fc->fixed_cost[static_cast<std::size_t>(i)]);
      for (int j = 0; j < n; ++j)
        lp.objective[static_cast<std::size_t>(i * n + j)] =
            Rational(fc->cost[static_cast<std::size_t>(i)]
                             [static_cast<std::size_t>(j)]);
    }
    for (int j = 0; j < n; ++j) {  // each client assigned exactly once
      std::vector<Rational> row(static_cast<std::size_t>(lp.n_vars), 0);
      for (int i = 0; i < n; ++i) row[static_cast<std::size_t>(i * n + j)] = 1;
      lp.eq_rows.push_back(std::move(row));
      lp.eq_rhs.push_back(1);
    }
    for (int i = 0; i < n; ++i) {  // sum_j d_j x_ij <= q_i y_i
      std::vector<Rational> row(static_cast<std::size_t>(lp.n_vars), 0);
      for (int j = 0; j < n; ++j)
        row[static_cast<std::size_t>(i * n + j)] = fc->demand[j];
      row[static_cast<std::size_t>(n * n + i)] = -fc->capacity[i];
      lp.le_rows.push_back(std::move(row));
      lp.le_rhs.push_back(0);
    }
    if (disagg)
      for (int i = 0; i < n; ++i)  // x_ij <= y_i
        for (int j = 0; j < n; ++j) {
          std::vector<Rational> row(static_cast<std::size_t>(lp.n_vars), 0);
          row[static_cast<std::size_t>(i * n + j)] = 1;
          row[static_cast<std::size_t>(n * n + i)] = -1;
          lp.le_rows.push_back(std::move(row));
          lp.le_rhs.push_back(0);
        }
    return lp;
  }
  throw UnsupportedFamily(
      "lp_relaxation: supported families are p-median and "
      "capacitated facility location");
}

// ---------------------------------------------------------------------------
// Box-constrained continuous QUBO minimization
// ---------------------------------------------------------------------------

struct BoxMinimizeResult {
  std::vector<double> x;       // stationary point in [0,1]^n
  double energy = 0.0;
  bool converged = false;      // false when the iteration cap was hit
  int iterations = 0;
};

namespace detail {

inline double box_energy(const QuboModel& q, const std::vector<double>& x) {
  double e = q.offset;
  for (const auto& [key, v] : q.coeffs)
    e += v * x[static_cast<std::size_t>(key.first)] *
         x[static_cast<std::size_t>(key.second)];
  return e;
}

inline std::vector<double> box_gradient(const QuboModel& q,
                                        const std::vector<double>& x) {
  std::vector<double> g(x.size(), 0.0);
  for (const auto& [key, v] : q.coeffs) {
    const auto i = static_cast<std::size_t>(key.first);
    const auto j = static_cast<std::size_t>(key.second);
    if (i == j) {
      g[i] += 2.0 * v * x[i];
    } else {
      g[i] += v * x[j];
      g[j] += v * x[i];
    }
  }
  return g;
}

}  // namespace detail

// Projected gradient descent with a backtracking (monotone) line search from
// x0; stops when the projected-gradient norm drops below 1e-6 or after
// 10*n_vars^2 iterations, whichever comes first.
inline BoxMinimizeResult minimize_box_qubo(const QuboModel& q,
                                           const std::vector<double>& x0) {
  if (static_cast<int>(x0.size()) != q.n_vars)
    throw LengthMismatch("minimize_box_qubo: start point length mismatch");
  const double tol = 1e-6;
  const int max_iter = 10 * q.n_vars * q.n_vars;
  auto clamp01 = [](double v) { return std::min(1.0, std::max(0.0, v)); };

  BoxMinimizeResult res;
  res.x = x0;
  for (double& v : res.x) v = clamp01(v);
  res.energy = detail::box_energy(q, res.x);
  double step = 1.0;
  for (res.iterations = 0; res.iterations < max_iter; ++res.iterations) {
    auto g = detail::box_gradient(q, res.x);
    double pg_norm = 0.0;  // norm of x - clamp(x - g)
    for (std::size_t i = 0; i < res.x.size(); ++i) {
      const double d = res.x[i] - clamp01(res.x[i] - g[i]);
      pg_norm += d * d;
    }
    if (std::sqrt(pg_norm) <= tol) {
      res.converged = true;
      break;
    }
    // backtracking on the projected step until sufficient decrease holds
    double t = std::min(step * 2.0, 1.0);
    for (;;) {
      std::vector<double> trial(res.x.size());
      double dist2 = 0.0;
      for (std::size_t i = 0; i < res.x.size(); ++i) {
        trial[i] = clamp01(res.x[i] - t * g[i]);
        const double d = trial[i] - res.x[i];
        dist2 += d * d;
      }
      const double trial_energy = detail::box_energy(q, trial);
      if (trial_energy <= res.energy - 1e-4 * dist2 / t || t < 1e-18) {
        res.x = std::move(trial);
        res.energy = trial_energy;
        step = t;
        break;
      }
      t *= 0.5;
    }
  }
  if (res.iterations >= max_iter) res.converged = false;
  return res;
}

// ---------------------------------------------------------------------------
// Lifted-matrix relaxation data (for external semidefinite solvers)
// ---------------------------------------------------------------------------

using DenseMatrix = std::vector<std::vector<double>>;

// min <objective, Y>  s.t.  <E_11, Y> = 1,  <linking[i], Y> = 0,  Y psd.
// Y is (n+1)x(n+1) with Y = (1, x)(1, x)^T at rank-1 binary points.
struct SdpRelaxationData {
  int dim = 0;                       // n + 1
  DenseMatrix objective;             // [[offset, 0], [0, Q_sym]]
  std::vector<DenseMatrix> linking;  // enforce Y_{1,i+1} = Y_{i+1,i+1}
};

inline SdpRelaxationData sdp_relaxation_data(const QuboModel& q) {
  const int n = q.n_vars;
  SdpRelaxationData d;
  d.dim = n + 1;
  d.objective.assign(static_cast<std::size_t>(n + 1),
                     std::vector<double>(static_cast<std::size_t>(n + 1), 0.0));
  d.objective[0][0] = q.offset;
  for (const auto& [key, v] : q.coeffs) {
    const auto i = static_cast<std::size_t>(key.first + 1);
    const auto j = static_cast<std::size_t>(key.second + 1);
    if (i == j) {
      d.objective[i][i] = v;
    } else {  // symmetric fold: split off-diagonal weight across both halves
      d.objective[i][j] = v / 2.0;
      d.objective[j][i] = v / 2.0;
    }
  }
  for (int i = 0; i < n; ++i) {
    DenseMatrix a(static_cast<std::size_t>(n + 1),
                  std::vector<double>(static_cast<std::size_t>(n + 1), 0.0));
    a[0][static_cast<std::size_t>(i + 1)] = -0.5;
    a[static_cast<std::size_t>(i + 1)][0] = -0.5;
    a[static_cast<std::size_t>(i + 1)][static_cast<std::size_t>(i + 1)] = 1.0;
    d.linking.push_back(std::move(a));
  }
  return d;
}

inline std::vector<double> extract_sdp_warmstart(const DenseMatrix& y) {
  const std::size_t dim = y.size();
  if (dim < 2) throw ShapeMismatch("Y: must be at least 2x2");
  for (const auto& row : y)
    if (row.size() != dim) throw ShapeMismatch("Y: must be square");
  if (std::abs(y[0][0] - 1.0) > 1e-6)
    throw NotNormalized("Y: top-left entry must be 1 within 1e-6");
  std::vector<double> x(dim - 1);
  for (std::size_t i = 1; i < dim; ++i)
    x[i - 1] = std::min(1.0, std::max(0.0, y[0][i]));
  return x;
}

inline nlohmann::json sdp_data_to_json(const SdpRelaxationData& d) {
  nlohmann::json j;
  j["dim"] = d.dim;
  j["objective"] = d.objective;
  j["linking"] = d.linking;
  return j;
}

inline DenseMatrix matrix_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw ParseError("matrix: expected an array of rows");
  DenseMatrix m;
  for (const auto& row : j) {
    if (!row.is_array()) throw ParseError("matrix: expected an array of rows");
    m.push_back(row.get<std::vector<double>>());
  }
  return m;
}

}  // namespace locqubo
