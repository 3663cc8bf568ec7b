#pragma once

// Warm-start construction for the biased-mixer variant of the variational
// solver: four strategies producing a point in [0,1]^n, an l-infinity ball
// projection keeping every component away from the poles, and the rotation
// angles theta_i = 2*arcsin(sqrt(x_i)) used for state preparation and mixing.

#include <cmath>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "locqubo/builders.hpp"
#include "locqubo/relaxations.hpp"

namespace locqubo {

// Clamp each component to [eps, 1-eps]: projection onto the ball of radius
// 0.5 - eps around (0.5, ..., 0.5) in the max norm.
inline std::vector<double> project_ball(const std::vector<double>& x,
                                        double eps) {
  if (!(eps > 0.0) || !(eps <= 0.5))
    throw EpsOutOfRange("eps: must lie in (0, 0.5]");
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    out[i] = std::min(1.0 - eps, std::max(eps, x[i]));
  return out;
}

struct WarmStartPoint {
  std::string strategy;           // "R", "S", "L" or "C"
  double epsilon = 0.0;
  std::vector<double> raw;        // pre-projection point in [0,1]^n
  std::vector<double> projected;  // clamped to [eps, 1-eps]
  std::vector<double> thetas;     // 2*arcsin(sqrt(projected_i))
};

namespace detail {

inline WarmStartPoint finish_warmstart(std::string strategy,
                                       std::vector<double> raw, double eps) {
  WarmStartPoint w;
  w.strategy = std::move(strategy);
  w.epsilon = eps;
  w.projected = project_ball(raw, eps);
  w.raw = std::move(raw);
  w.thetas.resize(w.projected.size());
  for (std::size_t i = 0; i < w.projected.size(); ++i)
    w.thetas[i] = 2.0 * std::asin(std::sqrt(w.projected[i]));
  return w;
}

}  // namespace detail

// R: continuous box relaxation of the QUBO from the center point.
inline WarmStartPoint strategy_R(const QuboModel& q, double eps) {
  std::vector<double> half(static_cast<std::size_t>(q.n_vars), 0.5);
  return detail::finish_warmstart("R", minimize_box_qubo(q, half).x, eps);
}

// S: extraction from an externally solved lifted-matrix relaxation.
inline WarmStartPoint strategy_S(const DenseMatrix& y, double eps) {
  return detail::finish_warmstart("S", extract_sdp_warmstart(y), eps);
}

// L: LP-relaxation solution in builder variable order; for capacitated
// models the capacity-slack bits encode floor(q_i - sum_j d_j x_ij),
// computed in exact rational arithmetic so integral residuals never
// misround at the boundary.
inline WarmStartPoint strategy_L(const ProblemInstance& inst,
                                 const std::string& formulation, double eps) {
  auto sol = solve_lp(lp_relaxation(inst, formulation));
  std::vector<double> raw;
  raw.reserve(sol.x.size());
  for (const auto& v : sol.x)
    raw.push_back(static_cast<double>(v));
  if (const auto* fc = std::get_if<FcflpInstance>(&inst)) {
    const int n = fc->n;
    for (int i = 0; i < n; ++i) {
      Rational resid = fc->capacity[i];
      for (int j = 0; j < n; ++j)
        resid -= Rational(fc->demand[j]) *
                 sol.x[static_cast<std::size_t>(i * n + j)];
      if (resid < 0) resid = 0;  // cannot occur for a feasible LP point
      const auto fl = static_cast<long long>(
          boost::multiprecision::numerator(resid) /
          boost::multiprecision::denominator(resid));
      const int bits = slack_bits(fc->capacity[i]);
      for (int k = 0; k < bits; ++k)
        raw.push_back(static_cast<double>((fl >> k) & 1LL));
    }
  }
  return detail::finish_warmstart("L", std::move(raw), eps);
}

// C: continuous box relaxation of the QUBO started from the L point.
inline WarmStartPoint strategy_C(const ProblemInstance& inst,
                                 const std::string& formulation,
                                 const QuboModel& q, double eps) {
  auto l = strategy_L(inst, formulation, eps);
  if (static_cast<int>(l.raw.size()) != q.n_vars)
    throw LengthMismatch("strategy_C: model does not match the instance");
  auto w = detail::finish_warmstart("C", minimize_box_qubo(q, l.raw).x, eps);
  return w;
}

inline nlohmann::json warmstart_to_json(const WarmStartPoint& w) {
  nlohmann::json j;
  j["strategy"] = w.strategy;
  j["epsilon"] = w.epsilon;
  j["raw"] = w.raw;
  j["projected"] = w.projected;
  j["thetas"] = w.thetas;
  return j;
}

inline WarmStartPoint warmstart_from_json(const nlohmann::json& j) {
  WarmStartPoint w;
  try {
    w.strategy = j.at("strategy").get<std::string>();
    w.epsilon = j.at("epsilon").get<double>();
    w.raw = j.at("raw").get<std::vector<double>>();
    w.projected = j.at("projected").get<std::vector<double>>();
    w.thetas = j.at("thetas").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("warm-start JSON: ") + e.what());
  }
  if (w.raw.size() != w.projected.size() ||
      w.raw.size() != w.thetas.size())
    throw ParseError("warm-start JSON: field lengths disagree");
  return w;
}

}  // namespace locqubo
