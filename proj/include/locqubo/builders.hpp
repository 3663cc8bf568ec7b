#pragma once

// QUBO construction for the six problem families: penalty defaults,
// logarithmic slack encodings, linearization of the ordered-median ranking
// products, and decoding of bitstrings back to structured solutions.

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "locqubo/errors.hpp"
#include "locqubo/instances.hpp"
#include "locqubo/qubo.hpp"

namespace locqubo {

// Number of bits of the logarithmic encoding of an integer range [0, U].
inline int slack_bits(std::int64_t U) {
  int l = 0;
  while ((1LL << l) < U + 1) ++l;
  return l;
}

// ---------------------------------------------------------------------------
// Accumulation helpers
// ---------------------------------------------------------------------------

// Adds P * (constant + sum_k a_k x_{idx_k})^2 to the model.
inline void add_square(QuboModel& q,
                       const std::vector<std::pair<int, double>>& terms,
                       double constant, double P) {
  q.offset += P * constant * constant;
  for (std::size_t a = 0; a < terms.size(); ++a) {
    auto [i, ai] = terms[a];
    q.add(i, i, P * (ai * ai + 2.0 * constant * ai));
    for (std::size_t b = a + 1; b < terms.size(); ++b) {
      auto [j, aj] = terms[b];
      q.add(i, j, 2.0 * P * ai * aj);
    }
  }
}

enum class SimpleConstraint { PairAtMostOne, LeqCoupling, SetAtMostOne };

// Penalty surrogates for the simple constraints that need no slack variable:
//   x_i + x_j <= 1      ->  P x_i x_j
//   x_i <= x_j          ->  P x_i (1 - x_j)
//   x_1 + ... + x_n <= 1 -> P sum_{i<j} x_i x_j
inline void table1_penalty(QuboModel& q, SimpleConstraint kind,
                           const std::vector<int>& vars, double P) {
  switch (kind) {
    case SimpleConstraint::PairAtMostOne:
      if (vars.size() != 2) throw SizeMismatch("pair-at-most-one needs 2 vars");
      q.add(vars[0], vars[1], P);
      return;
    case SimpleConstraint::LeqCoupling:
      if (vars.size() != 2) throw SizeMismatch("leq-coupling needs 2 vars");
      q.add(vars[0], vars[0], P);
      q.add(vars[0], vars[1], -P);
      return;
    case SimpleConstraint::SetAtMostOne:
      for (std::size_t a = 0; a < vars.size(); ++a)
        for (std::size_t b = a + 1; b < vars.size(); ++b)
          q.add(vars[a], vars[b], P);
      return;
  }
}

namespace detail {

inline double resolve_penalty(std::optional<double> user, double bound,
                              std::vector<std::string>* warnings) {
  if (!user) return bound;
  if (*user < bound && warnings)
    warnings->push_back("penalty " + format_double(*user) +
                        " is below the certified bound " +
                        format_double(bound) +
                        "; minimizers may be infeasible");
  return *user;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Builders. Variable ordering is fixed per family (assignment block first,
// location block second, slack/aux blocks in constraint order); the decoder
// and all matrix-level tests depend on it.
// ---------------------------------------------------------------------------

inline QuboModel build_pmedian(const PMedianInstance& inst,
                               std::optional<double> penalty = {},
                               std::vector<std::string>* warnings = nullptr) {
  inst.validate();
  const int n = inst.n;
  double bound = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      bound += static_cast<double>(inst.demand[j] * inst.cost[i][j]);
  const double P = detail::resolve_penalty(penalty, bound + 1.0, warnings);

  QuboModel q;
  q.n_vars = n * n + n;
  q.penalty = P;
  q.family = Family::PMedian;
  q.source = std::make_shared<const ProblemInstance>(inst);
  auto X = [n](int i, int j) { return i * n + j; };
  auto Y = [n](int i) { return n * n + i; };
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) q.var_map.add("x", {i, j});
  }
  for (int i = 0; i < n; ++i) q.var_map.add("y", {i});

  // objective
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      q.add(X(i, j), X(i, j),
            static_cast<double>(inst.demand[j] * inst.cost[i][j]));
  // each client assigned exactly once
  for (int j = 0; j < n; ++j) {
    std::vector<std::pair<int, double>> terms;
    for (int i = 0; i < n; ++i) terms.push_back({X(i, j), -1.0});
    add_square(q, terms, 1.0, P);
  }
  // assignment only to open facilities
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      table1_penalty(q, SimpleConstraint::LeqCoupling, {X(i, j), Y(i)}, P);
  // exactly p facilities
  {
    std::vector<std::pair<int, double>> terms;
    for (int i = 0; i < n; ++i) terms.push_back({Y(i), -1.0});
    add_square(q, terms, static_cast<double>(inst.p), P);
  }
  return q;
}

inline QuboModel build_pcenter(const PCenterInstance& inst,
                               std::optional<double> penalty = {},
                               std::vector<std::string>* warnings = nullptr) {
  inst.validate();
  const int n = inst.n;
  const std::int64_t dmax = inst.d_max(), dmin = inst.d_min();
  const int lz = slack_bits(dmax - dmin);
  const int ls = slack_bits(dmax);
  const int lu = slack_bits(inst.p);
  const double P = detail::resolve_penalty(
      penalty, static_cast<double>((1LL << lz) - 1) + 1.0, warnings);

  QuboModel q;
  q.n_vars = n * n + n + lz + n * ls + lu;
  q.penalty = P;
  q.family = Family::PCenter;
  q.source = std::make_shared<const ProblemInstance>(inst);
  auto X = [n](int i, int j) { return i * n + j; };
  auto Y = [n](int i) { return n * n + i; };
  auto Z = [n](int k) { return n * n + n + k; };
  auto S = [n, lz, ls](int j, int k) { return n * n + n + lz + j * ls + k; };
  auto U = [n, lz, ls](int k) { return n * n + n + lz + n * ls + k; };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) q.var_map.add("x", {i, j});
  for (int i = 0; i < n; ++i) q.var_map.add("y", {i});
  for (int k = 0; k < lz; ++k) q.var_map.add("z", {k});
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < ls; ++k) q.var_map.add("s", {j, k});
  for (int k = 0; k < lu; ++k) q.var_map.add("u", {k});

  // objective: z = d_min + sum 2^{k-1} z_k
  q.offset += static_cast<double>(dmin);
  for (int k = 0; k < lz; ++k)
    q.add(Z(k), Z(k), static_cast<double>(1LL << k));
  // each client assigned exactly once
  for (int j = 0; j < n; ++j) {
    std::vector<std::pair<int, double>> terms;
    for (int i = 0; i < n; ++i) terms.push_back({X(i, j), -1.0});
    add_square(q, terms, 1.0, P);
  }
  // per-client distance balance: d_min + z - s_j - sum d_ij x_ij = 0
  for (int j = 0; j < n; ++j) {
    std::vector<std::pair<int, double>> terms;
    for (int k = 0; k < lz; ++k)
      terms.push_back({Z(k), static_cast<double>(1LL << k)});
    for (int k = 0; k < ls; ++k)
      terms.push_back({S(j, k), -static_cast<double>(1LL << k)});
    for (int i = 0; i < n; ++i)
      terms.push_back({X(i, j), -static_cast<double>(inst.distance[i][j])});
    add_square(q, terms, static_cast<double>(dmin), P);
  }
  // assignment only to open facilities
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      table1_penalty(q, SimpleConstraint::LeqCoupling, {X(i, j), Y(i)}, P);
  // at most p facilities: p - sum y - u = 0
  {
    std::vector<std::pair<int, double>> terms;
    for (int i = 0; i < n; ++i) terms.push_back({Y(i), -1.0});
    for (int k = 0; k < lu; ++k)
      terms.push_back({U(k), -static_cast<double>(1LL << k)});
    add_square(q, terms, static_cast<double>(inst.p), P);
  }
  return q;
}

namespace detail {

inline double fcflp_penalty_bound(const FcflpInstance& inst) {
  double s = 0.0;
  for (double f : inst.fixed_cost) s += f;
  for (const auto& row : inst.cost)
    for (double c : row) s += c;
  return s + 1.0;
}

}  // namespace detail

inline QuboModel build_fcflp_aggregated(
    const FcflpInstance& inst, std::optional<double> penalty = {},
    std::vector<std::string>* warnings = nullptr) {
  inst.validate();
  const int n = inst.n;
  const double P = detail::resolve_penalty(
      penalty, detail::fcflp_penalty_bound(inst), warnings);
  std::vector<int> ki(static_cast<std::size_t>(n));
  std::vector<int> zoff(static_cast<std::size_t>(n));
  int total_slack = 0;
  for (int i = 0; i < n; ++i) {
    ki[static_cast<std::size_t>(i)] = slack_bits(inst.capacity[i]);
    zoff[static_cast<std::size_t>(i)] = total_slack;
    total_slack += ki[static_cast<std::size_t>(i)];
  }

  QuboModel q;
  q.n_vars = n * n + n + total_slack;
  q.penalty = P;
  q.family = Family::Fcflp;
  q.formulation = "aggregated";
  q.source = std::make_shared<const ProblemInstance>(inst);
  auto X = [n](int i, int j) { return i * n + j; };
  auto Y = [n](int i) { return n * n + i; };
  auto Z = [n, &zoff](int i, int k) {
    return n * n + n + zoff[static_cast<std::size_t>(i)] + k;
  };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) q.var_map.add("x", {i, j});
  for (int i = 0; i < n; ++i) q.var_map.add("y", {i});
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < ki[static_cast<std::size_t>(i)]; ++k)
      q.var_map.add("z", {i, k});

  // objective
  for (int i = 0; i < n; ++i) {
    q.add(Y(i), Y(i), inst.fixed_cost[static_cast<std::size_t>(i)]);
    for (int j = 0; j < n; ++j)
      q.add(X(i, j), X(i, j),
            inst.cost[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
  }
  // each client served exactly once
  for (int j = 0; j < n; ++j) {
    std::vector<std::pair<int, double>> terms;
    for (int i = 0; i < n; ++i) terms.push_back({X(i, j), -1.0});
    add_square(q, terms, 1.0, P);
  }
  // capacity coupled to opening: q_i y_i - sum d_j x_ij - u_i = 0
  for (int i = 0; i < n; ++i) {
    std::vector<std::pair<int, double>> terms;
    terms.push_back({Y(i), static_cast<double>(inst.capacity[i])});
    for (int j = 0; j < n; ++j)
      terms.push_back({X(i, j), -static_cast<double>(inst.demand[j])});
    for (int k = 0; k < ki[static_cast<std::size_t>(i)]; ++k)
      terms.push_back({Z(i, k), -static_cast<double>(1LL << k)});
    add_square(q, terms, 0.0, P);
  }
  return q;
}

inline QuboModel build_fcflp_disaggregated(
    const FcflpInstance& inst, std::optional<double> penalty = {},
    std::vector<std::string>* warnings = nullptr) {
  inst.validate();
  const int n = inst.n;
  const double P = detail::resolve_penalty(
      penalty, detail::fcflp_penalty_bound(inst), warnings);
  std::vector<int> ki(static_cast<std::size_t>(n));
  std::vector<int> zoff(static_cast<std::size_t>(n));
  int total_slack = 0;
  for (int i = 0; i < n; ++i) {
    ki[static_cast<std::size_t>(i)] = slack_bits(inst.capacity[i]);
    zoff[static_cast<std::size_t>(i)] = total_slack;
    total_slack += ki[static_cast<std::size_t>(i)];
  }

  QuboModel q;
  q.n_vars = n * n + n + total_slack;
  q.penalty = P;
  q.family = Family::Fcflp;
  q.formulation = "disaggregated";
  q.source = std::make_shared<const ProblemInstance>(inst);
  auto X = [n](int i, int j) { return i * n + j; };
  auto Y = [n](int i) { return n * n + i; };
  auto Z = [n, &zoff](int i, int k) {
    return n * n + n + zoff[static_cast<std::size_t>(i)] + k;
  };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) q.var_map.add("x", {i, j});
  for (int i = 0; i < n; ++i) q.var_map.add("y", {i});
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < ki[static_cast<std::size_t>(i)]; ++k)
      q.var_map.add("z", {i, k});

  for (int i = 0; i < n; ++i) {
    q.add(Y(i), Y(i), inst.fixed_cost[static_cast<std::size_t>(i)]);
    for (int j = 0; j < n; ++j)
      q.add(X(i, j), X(i, j),
            inst.cost[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
  }
  for (int j = 0; j < n; ++j) {
    std::vector<std::pair<int, double>> terms;
    for (int i = 0; i < n; ++i) terms.push_back({X(i, j), -1.0});
    add_square(q, terms, 1.0, P);
  }
  // capacity: q_i - sum d_j x_ij - u_i = 0
  for (int i = 0; i < n; ++i) {
    std::vector<std::pair<int, double>> terms;
    for (int j = 0; j < n; ++j)
      terms.push_back({X(i, j), -static_cast<double>(inst.demand[j])});
    for (int k = 0; k < ki[static_cast<std::size_t>(i)]; ++k)
      terms.push_back({Z(i, k), -static_cast<double>(1LL << k)});
    add_square(q, terms, static_cast<double>(inst.capacity[i]), P);
  }
  // assignment only to open facilities
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      table1_penalty(q, SimpleConstraint::LeqCoupling, {X(i, j), Y(i)}, P);
  return q;
}

inline QuboModel build_gap(const GapInstance& inst,
                           std::optional<double> penalty = {},
                           std::vector<std::string>* warnings = nullptr) {
  inst.validate();
  const int m = static_cast<int>(inst.open_sites.size());
  const int n = inst.n;
  double bound = 0.0;
  for (const auto& row : inst.cost)
    for (auto c : row) bound += static_cast<double>(c);
  const double P = detail::resolve_penalty(penalty, bound + 1.0, warnings);

  std::vector<int> li(static_cast<std::size_t>(m));
  std::vector<int> zoff(static_cast<std::size_t>(m));
  int total_slack = 0;
  for (int i = 0; i < m; ++i) {
    li[static_cast<std::size_t>(i)] = slack_bits(inst.capacity[i]);
    zoff[static_cast<std::size_t>(i)] = total_slack;
    total_slack += li[static_cast<std::size_t>(i)];
  }

  QuboModel q;
  q.n_vars = m * n + total_slack;
  q.penalty = P;
  q.family = Family::Gap;
  q.source = std::make_shared<const ProblemInstance>(inst);
  auto X = [n](int i, int j) { return i * n + j; };  // i = position in S
  auto Z = [m, n, &zoff](int i, int k) {
    return m * n + zoff[static_cast<std::size_t>(i)] + k;
  };
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) q.var_map.add("x", {inst.open_sites[i], j});
  for (int i = 0; i < m; ++i)
    for (int k = 0; k < li[static_cast<std::size_t>(i)]; ++k)
      q.var_map.add("z", {inst.open_sites[i], k});

  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j)
      q.add(X(i, j), X(i, j), static_cast<double>(inst.cost[i][j]));
  for (int j = 0; j < n; ++j) {
    std::vector<std::pair<int, double>> terms;
    for (int i = 0; i < m; ++i) terms.push_back({X(i, j), -1.0});
    add_square(q, terms, 1.0, P);
  }
  for (int i = 0; i < m; ++i) {
    std::vector<std::pair<int, double>> terms;
    for (int j = 0; j < n; ++j)
      terms.push_back({X(i, j), -static_cast<double>(inst.demand[j])});
    for (int k = 0; k < li[static_cast<std::size_t>(i)]; ++k)
      terms.push_back({Z(i, k), -static_cast<double>(1LL << k)});
    add_square(q, terms, static_cast<double>(inst.capacity[i]), P);
  }
  return q;
}

inline QuboModel build_domp(const DompInstance& inst,
                            std::optional<double> penalty = {},
                            std::vector<std::string>* warnings = nullptr) {
  inst.validate();
  const int M = inst.m;
  const std::int64_t SC = inst.cost_sum();
  const int lsc = slack_bits(SC);
  double lambda_sum = 0.0;
  for (double l : inst.lambda) lambda_sum += l;
  const double P = detail::resolve_penalty(
      penalty, lambda_sum * static_cast<double>(SC) + 1.0, warnings);

  QuboModel q;
  q.n_vars = M + 2 * M * M + 3 * M * M * M + (M - 1) * lsc;
  q.penalty = P;
  q.family = Family::Domp;
  q.source = std::make_shared<const ProblemInstance>(inst);
  // Order: x_j | y_ij | s_ij | u_ikj | w_ikj bits | v_ik
  auto X = [](int j) { return j; };
  auto Y = [M](int i, int j) { return M + i * M + j; };
  auto S = [M](int i, int j) { return M + M * M + i * M + j; };
  auto U = [M](int i, int k, int j) {
    return M + 2 * M * M + (i * M + k) * M + j;
  };
  auto W = [M](int i, int k, int j, int t) {
    return M + 2 * M * M + M * M * M + 2 * ((i * M + k) * M + j) + t;
  };
  auto V = [M, lsc](int i, int k) {
    return M + 2 * M * M + 3 * M * M * M + i * lsc + k;
  };
  for (int j = 0; j < M; ++j) q.var_map.add("x", {j});
  for (int i = 0; i < M; ++i)
    for (int j = 0; j < M; ++j) q.var_map.add("y", {i, j});
  for (int i = 0; i < M; ++i)
    for (int j = 0; j < M; ++j) q.var_map.add("s", {i, j});
  for (int i = 0; i < M; ++i)
    for (int k = 0; k < M; ++k)
      for (int j = 0; j < M; ++j) q.var_map.add("u", {i, k, j});
  for (int i = 0; i < M; ++i)
    for (int k = 0; k < M; ++k)
      for (int j = 0; j < M; ++j)
        for (int t = 0; t < 2; ++t) q.var_map.add("w", {i, k, j, t});
  for (int i = 0; i < M - 1; ++i)
    for (int k = 0; k < lsc; ++k) q.var_map.add("v", {i, k});

  // objective: sum lambda_i c_kj u_ikj
  for (int i = 0; i < M; ++i)
    for (int k = 0; k < M; ++k)
      for (int j = 0; j < M; ++j)
        q.add(U(i, k, j), U(i, k, j),
              inst.lambda[static_cast<std::size_t>(i)] *
                  static_cast<double>(inst.cost[k][j]));
  // exactly N facilities
  {
    std::vector<std::pair<int, double>> terms;
    for (int j = 0; j < M; ++j) terms.push_back({X(j), 1.0});
    add_square(q, terms, -static_cast<double>(inst.n_open), P);
  }
  // each client assigned once
  for (int i = 0; i < M; ++i) {
    std::vector<std::pair<int, double>> terms;
    for (int j = 0; j < M; ++j) terms.push_back({Y(i, j), 1.0});
    add_square(q, terms, -1.0, P);
  }
  // assignment only to open facilities
  for (int i = 0; i < M; ++i)
    for (int j = 0; j < M; ++j)
      table1_penalty(q, SimpleConstraint::LeqCoupling, {Y(i, j), X(j)}, P);
  // ranking is a permutation (column and row sums)
  for (int j = 0; j < M; ++j) {
    std::vector<std::pair<int, double>> terms;
    for (int i = 0; i < M; ++i) terms.push_back({S(i, j), 1.0});
    add_square(q, terms, -1.0, P);
  }
  for (int i = 0; i < M; ++i) {
    std::vector<std::pair<int, double>> terms;
    for (int j = 0; j < M; ++j) terms.push_back({S(i, j), 1.0});
    add_square(q, terms, -1.0, P);
  }
  // product linearization u = s*y: u <= s, u <= y, u >= s + y - 1
  for (int i = 0; i < M; ++i)
    for (int k = 0; k < M; ++k)
      for (int j = 0; j < M; ++j) {
        table1_penalty(q, SimpleConstraint::LeqCoupling,
                       {U(i, k, j), S(i, k)}, P);
        table1_penalty(q, SimpleConstraint::LeqCoupling,
                       {U(i, k, j), Y(k, j)}, P);
        add_square(q,
                   {{U(i, k, j), -1.0},
                    {S(i, k), 1.0},
                    {Y(k, j), 1.0},
                    {W(i, k, j, 0), 1.0},
                    {W(i, k, j, 1), 2.0}},
                   -1.0, P);
      }
  // rank monotonicity with slack v_i
  for (int i = 0; i < M - 1; ++i) {
    std::vector<std::pair<int, double>> terms;
    for (int k = 0; k < M; ++k)
      for (int j = 0; j < M; ++j) {
        double c = static_cast<double>(inst.cost[k][j]);
        if (c != 0.0) {
          terms.push_back({U(i, k, j), c});
          terms.push_back({U(i + 1, k, j), -c});
        }
      }
    for (int k = 0; k < lsc; ++k)
      terms.push_back({V(i, k), static_cast<double>(1LL << k)});
    add_square(q, terms, 0.0, P);
  }
  return q;
}

inline QuboModel build_dmpflp(const DmpflpInstance& inst,
                              std::optional<double> penalty = {},
                              std::vector<std::string>* warnings = nullptr) {
  inst.validate();
  const int n = inst.n, T = inst.periods;
  double bound = 0.0;
  for (const auto& m : inst.cost)
    for (const auto& row : m)
      for (double c : row) bound += c;
  for (const auto& row : inst.open_cost)
    for (double g : row) bound += g;
  for (const auto& row : inst.close_cost)
    for (double h : row) bound += h;
  const double P = detail::resolve_penalty(penalty, bound + 1.0, warnings);

  const int ly = slack_bits(n);  // per (i,t) slack of the |J|-coupling row
  std::vector<int> lu(static_cast<std::size_t>(T));
  std::vector<int> uoff(static_cast<std::size_t>(T));
  int total_u = 0;
  for (int t = 0; t < T; ++t) {
    lu[static_cast<std::size_t>(t)] = slack_bits(inst.open_limit[t]);
    uoff[static_cast<std::size_t>(t)] = total_u;
    total_u += lu[static_cast<std::size_t>(t)];
  }

  QuboModel q;
  q.n_vars = n * n * T + 2 * n * T + n * T * ly + total_u;
  q.penalty = P;
  q.family = Family::Dmpflp;
  q.source = std::make_shared<const ProblemInstance>(inst);
  // Order: x_tij | zo_ti (openings) | zc_ti (closings) | y_tik | u_tk
  auto X = [n](int t, int i, int j) { return (t * n + i) * n + j; };
  auto ZO = [n, T](int t, int i) { return n * n * T + t * n + i; };
  auto ZC = [n, T](int t, int i) { return n * n * T + n * T + t * n + i; };
  auto YS = [n, T, ly](int t, int i, int k) {
    return n * n * T + 2 * n * T + (t * n + i) * ly + k;
  };
  auto U = [n, T, ly, &uoff](int t, int k) {
    return n * n * T + 2 * n * T + n * T * ly +
           uoff[static_cast<std::size_t>(t)] + k;
  };
  for (int t = 0; t < T; ++t)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) q.var_map.add("x", {t, i, j});
  for (int t = 0; t < T; ++t)
    for (int i = 0; i < n; ++i) q.var_map.add("zo", {t, i});
  for (int t = 0; t < T; ++t)
    for (int i = 0; i < n; ++i) q.var_map.add("zc", {t, i});
  for (int t = 0; t < T; ++t)
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < ly; ++k) q.var_map.add("y", {t, i, k});
  for (int t = 0; t < T; ++t)
    for (int k = 0; k < lu[static_cast<std::size_t>(t)]; ++k)
      q.var_map.add("u", {t, k});

  // objective
  for (int t = 0; t < T; ++t)
    for (int i = 0; i < n; ++i) {
      q.add(ZO(t, i), ZO(t, i),
            inst.open_cost[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)]);
      q.add(ZC(t, i), ZC(t, i),
            inst.close_cost[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)]);
      for (int j = 0; j < n; ++j)
        q.add(X(t, i, j), X(t, i, j),
              inst.cost[static_cast<std::size_t>(t)][static_cast<std::size_t>(i)]
                       [static_cast<std::size_t>(j)]);
    }
  // each client served each period
  for (int t = 0; t < T; ++t)
    for (int j = 0; j < n; ++j) {
      std::vector<std::pair<int, double>> terms;
      for (int i = 0; i < n; ++i) terms.push_back({X(t, i, j), -1.0});
      add_square(q, terms, 1.0, P);
    }
  // service only from operating sites: |J| x_iit - sum_j x_ijt - y_it = 0
  for (int t = 0; t < T; ++t)
    for (int i = 0; i < n; ++i) {
      std::vector<std::pair<int, double>> terms;
      terms.push_back({X(t, i, i), static_cast<double>(n)});
      for (int j = 0; j < n; ++j) terms.push_back({X(t, i, j), -1.0});
      for (int k = 0; k < ly; ++k)
        terms.push_back({YS(t, i, k), -static_cast<double>(1LL << k)});
      add_square(q, terms, 0.0, P);
    }
  // exactly p operating sites per period
  for (int t = 0; t < T; ++t) {
    std::vector<std::pair<int, double>> terms;
    for (int i = 0; i < n; ++i) terms.push_back({X(t, i, i), -1.0});
    add_square(q, terms, static_cast<double>(inst.p), P);
  }
  // per-period opening limit: m_t - u_t - sum_i zo_it = 0
  for (int t = 0; t < T; ++t) {
    std::vector<std::pair<int, double>> terms;
    for (int k = 0; k < lu[static_cast<std::size_t>(t)]; ++k)
      terms.push_back({U(t, k), -static_cast<double>(1LL << k)});
    for (int i = 0; i < n; ++i) terms.push_back({ZO(t, i), -1.0});
    add_square(q, terms, static_cast<double>(inst.open_limit[t]), P);
  }
  // opening/closing balance between consecutive periods
  for (int t = 1; t < T; ++t)
    for (int i = 0; i < n; ++i)
      add_square(q,
                 {{X(t, i, i), 1.0},
                  {X(t - 1, i, i), -1.0},
                  {ZC(t - 1, i), 1.0},
                  {ZO(t, i), -1.0}},
                 0.0, P);
  return q;
}

inline QuboModel build_qubo(const ProblemInstance& inst,
                            const std::string& formulation = "",
                            std::optional<double> penalty = {},
                            std::vector<std::string>* warnings = nullptr) {
  switch (family_of(inst)) {
    case Family::PMedian:
      return build_pmedian(std::get<PMedianInstance>(inst), penalty, warnings);
    case Family::PCenter:
      return build_pcenter(std::get<PCenterInstance>(inst), penalty, warnings);
    case Family::Fcflp:
      if (formulation == "disaggregated")
        return build_fcflp_disaggregated(std::get<FcflpInstance>(inst),
                                         penalty, warnings);
      return build_fcflp_aggregated(std::get<FcflpInstance>(inst), penalty,
                                    warnings);
    case Family::Gap:
      return build_gap(std::get<GapInstance>(inst), penalty, warnings);
    case Family::Domp:
      return build_domp(std::get<DompInstance>(inst), penalty, warnings);
    case Family::Dmpflp:
      return build_dmpflp(std::get<DmpflpInstance>(inst), penalty, warnings);
  }
  throw UnknownFamily("build_qubo: unhandled family");
}

// ---------------------------------------------------------------------------
// Decoding: reconstruct named variables and evaluate every constraint of the
// equality-form source program (including slack consistency, so that
// feasible <=> zero total penalty <=> energy == original objective).
// ---------------------------------------------------------------------------

struct StructuredSolution {
  Family family = Family::PMedian;
  std::map<std::string, double> values;  // named variables / decoded slacks
  std::vector<int> opened;               // opened facility indices (0-based)
  bool feasible = true;
  std::vector<std::pair<std::string, double>> violations;  // (constraint, residual)
  double original_objective = 0.0;  // defined when feasible
};

namespace detail {

inline void check(StructuredSolution& sol, const std::string& id,
                  double residual) {
  if (residual != 0.0) {
    sol.feasible = false;
    sol.violations.push_back({id, residual});
  }
}

}  // namespace detail

inline StructuredSolution decode(const QuboModel& q, const Bitstring& x) {
  if (static_cast<int>(x.size()) != q.n_vars)
    throw LengthMismatch("decode: bitstring length mismatch");
  if (!q.family || !q.source)
    throw UnknownFamily("decode: model carries no source-problem metadata");
  StructuredSolution sol;
  sol.family = *q.family;
  const ProblemInstance& pin = *q.source;
  auto bit = [&x](int idx) { return x[static_cast<std::size_t>(idx)]; };
  using detail::check;

  switch (*q.family) {
    case Family::PMedian: {
      const auto& in = std::get<PMedianInstance>(pin);
      const int n = in.n;
      auto X = [n, &bit](int i, int j) { return bit(i * n + j); };
      auto Y = [n, &bit](int i) { return bit(n * n + i); };
      double obj = 0.0;
      int open_count = 0;
      for (int i = 0; i < n; ++i) {
        if (Y(i)) {
          sol.opened.push_back(i);
          ++open_count;
        }
        sol.values["y(" + std::to_string(i) + ")"] = Y(i);
      }
      for (int j = 0; j < n; ++j) {
        int assigned = 0;
        for (int i = 0; i < n; ++i) {
          if (X(i, j)) {
            ++assigned;
            obj += static_cast<double>(in.demand[j] * in.cost[i][j]);
            sol.values["x(" + std::to_string(i) + "," + std::to_string(j) + ")"] = 1;
            if (!Y(i))
              check(sol, "coupling x(" + std::to_string(i) + "," +
                             std::to_string(j) + ")<=y",
                    1.0);
          }
        }
        check(sol, "assignment client " + std::to_string(j),
              static_cast<double>(assigned - 1));
      }
      check(sol, "facility count", static_cast<double>(open_count - in.p));
      if (sol.feasible) sol.original_objective = obj;
      break;
    }
    case Family::PCenter: {
      const auto& in = std::get<PCenterInstance>(pin);
      const int n = in.n;
      const std::int64_t dmax = in.d_max(), dmin = in.d_min();
      const int lz = slack_bits(dmax - dmin);
      const int ls = slack_bits(dmax);
      const int lup = slack_bits(in.p);
      auto X = [n, &bit](int i, int j) { return bit(i * n + j); };
      auto Y = [n, &bit](int i) { return bit(n * n + i); };
      std::int64_t zval = dmin;
      for (int k = 0; k < lz; ++k)
        zval += static_cast<std::int64_t>(bit(n * n + n + k)) << k;
      sol.values["z"] = static_cast<double>(zval);
      std::int64_t uval = 0;
      for (int k = 0; k < lup; ++k)
        uval += static_cast<std::int64_t>(bit(n * n + n + lz + n * ls + k)) << k;
      int open_count = 0;
      for (int i = 0; i < n; ++i)
        if (Y(i)) {
          sol.opened.push_back(i);
          ++open_count;
        }
      for (int j = 0; j < n; ++j) {
        int assigned = 0;
        std::int64_t dist = 0;
        for (int i = 0; i < n; ++i)
          if (X(i, j)) {
            ++assigned;
            dist += in.distance[i][j];
            if (!Y(i))
              check(sol, "coupling x(" + std::to_string(i) + "," +
                             std::to_string(j) + ")<=y",
                    1.0);
          }
        check(sol, "assignment client " + std::to_string(j),
              static_cast<double>(assigned - 1));
        std::int64_t sj = 0;
        for (int k = 0; k < ls; ++k)
          sj += static_cast<std::int64_t>(bit(n * n + n + lz + j * ls + k)) << k;
        check(sol, "distance balance client " + std::to_string(j),
              static_cast<double>(zval - sj - dist));
      }
      check(sol, "facility limit",
            static_cast<double>(in.p - open_count - uval));
      if (sol.feasible) sol.original_objective = static_cast<double>(zval);
      break;
    }
    case Family::Fcflp: {
      const auto& in = std::get<FcflpInstance>(pin);
      const int n = in.n;
      const bool agg = q.formulation != "disaggregated";
      auto X = [n, &bit](int i, int j) { return bit(i * n + j); };
      auto Y = [n, &bit](int i) { return bit(n * n + i); };
      std::vector<int> ki(static_cast<std::size_t>(n));
      std::vector<int> zoff(static_cast<std::size_t>(n));
      int off = 0;
      for (int i = 0; i < n; ++i) {
        ki[static_cast<std::size_t>(i)] = slack_bits(in.capacity[i]);
        zoff[static_cast<std::size_t>(i)] = off;
        off += ki[static_cast<std::size_t>(i)];
      }
      double obj = 0.0;
      for (int i = 0; i < n; ++i)
        if (Y(i)) {
          sol.opened.push_back(i);
          obj += in.fixed_cost[static_cast<std::size_t>(i)];
        }
      for (int j = 0; j < n; ++j) {
        int assigned = 0;
        for (int i = 0; i < n; ++i)
          if (X(i, j)) {
            ++assigned;
            obj += in.cost[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            if (!agg && !Y(i))
              check(sol, "coupling x(" + std::to_string(i) + "," +
                             std::to_string(j) + ")<=y",
                    1.0);
          }
        check(sol, "assignment client " + std::to_string(j),
              static_cast<double>(assigned - 1));
      }
      for (int i = 0; i < n; ++i) {
        std::int64_t load = 0;
        for (int j = 0; j < n; ++j)
          if (X(i, j)) load += in.demand[j];
        std::int64_t ui = 0;
        for (int k = 0; k < ki[static_cast<std::size_t>(i)]; ++k)
          ui += static_cast<std::int64_t>(
                    bit(n * n + n + zoff[static_cast<std::size_t>(i)] + k))
                << k;
        sol.values["u(" + std::to_string(i) + ")"] = static_cast<double>(ui);
        std::int64_t rhs = agg ? in.capacity[i] * Y(i) : in.capacity[i];
        check(sol, "capacity facility " + std::to_string(i),
              static_cast<double>(rhs - load - ui));
      }
      if (sol.feasible) sol.original_objective = obj;
      break;
    }
    case Family::Gap: {
      const auto& in = std::get<GapInstance>(pin);
      const int m = static_cast<int>(in.open_sites.size());
      const int n = in.n;
      auto X = [n, &bit](int i, int j) { return bit(i * n + j); };
      std::vector<int> li(static_cast<std::size_t>(m));
      std::vector<int> zoff(static_cast<std::size_t>(m));
      int off = 0;
      for (int i = 0; i < m; ++i) {
        li[static_cast<std::size_t>(i)] = slack_bits(in.capacity[i]);
        zoff[static_cast<std::size_t>(i)] = off;
        off += li[static_cast<std::size_t>(i)];
      }
      sol.opened = in.open_sites;
      double obj = 0.0;
      for (int j = 0; j < n; ++j) {
        int assigned = 0;
        for (int i = 0; i < m; ++i)
          if (X(i, j)) {
            ++assigned;
            obj += static_cast<double>(in.cost[i][j]);
          }
        check(sol, "assignment client " + std::to_string(j),
              static_cast<double>(assigned - 1));
      }
      for (int i = 0; i < m; ++i) {
        std::int64_t load = 0;
        for (int j = 0; j < n; ++j)
          if (X(i, j)) load += in.demand[j];
        std::int64_t ui = 0;
        for (int k = 0; k < li[static_cast<std::size_t>(i)]; ++k)
          ui += static_cast<std::int64_t>(
                    bit(m * n + zoff[static_cast<std::size_t>(i)] + k))
                << k;
        check(sol,
              "capacity site " + std::to_string(in.open_sites[i]),
              static_cast<double>(in.capacity[i] - load - ui));
      }
      if (sol.feasible) sol.original_objective = obj;
      break;
    }
    case Family::Domp: {
      const auto& in = std::get<DompInstance>(pin);
      const int M = in.m;
      const std::int64_t SC = in.cost_sum();
      const int lsc = slack_bits(SC);
      auto X = [&bit](int j) { return bit(j); };
      auto Y = [M, &bit](int i, int j) { return bit(M + i * M + j); };
      auto S = [M, &bit](int i, int j) { return bit(M + M * M + i * M + j); };
      auto U = [M, &bit](int i, int k, int j) {
        return bit(M + 2 * M * M + (i * M + k) * M + j);
      };
      auto W = [M, &bit](int i, int k, int j, int t) {
        return bit(M + 2 * M * M + M * M * M + 2 * ((i * M + k) * M + j) + t);
      };
      auto V = [M, lsc, &bit](int i, int k) {
        return bit(M + 2 * M * M + 3 * M * M * M + i * lsc + k);
      };
      int open_count = 0;
      for (int j = 0; j < M; ++j)
        if (X(j)) {
          sol.opened.push_back(j);
          ++open_count;
        }
      check(sol, "facility count",
            static_cast<double>(open_count - in.n_open));
      for (int i = 0; i < M; ++i) {
        int assigned = 0;
        for (int j = 0; j < M; ++j)
          if (Y(i, j)) {
            ++assigned;
            if (!X(j))
              check(sol, "coupling y(" + std::to_string(i) + "," +
                             std::to_string(j) + ")<=x",
                    1.0);
          }
        check(sol, "assignment client " + std::to_string(i),
              static_cast<double>(assigned - 1));
      }
      for (int j = 0; j < M; ++j) {
        int colsum = 0;
        for (int i = 0; i < M; ++i) colsum += S(i, j);
        check(sol, "rank column " + std::to_string(j),
              static_cast<double>(colsum - 1));
      }
      for (int i = 0; i < M; ++i) {
        int rowsum = 0;
        for (int j = 0; j < M; ++j) rowsum += S(i, j);
        check(sol, "rank row " + std::to_string(i),
              static_cast<double>(rowsum - 1));
      }
      double obj = 0.0;
      for (int i = 0; i < M; ++i)
        for (int k = 0; k < M; ++k)
          for (int j = 0; j < M; ++j) {
            int u = U(i, k, j), s = S(i, k), y = Y(k, j);
            if (u > s)
              check(sol, "product upper s", 1.0);
            if (u > y)
              check(sol, "product upper y", 1.0);
            int w = W(i, k, j, 0) + 2 * W(i, k, j, 1);
            check(sol,
                  "product lower (" + std::to_string(i) + "," +
                      std::to_string(k) + "," + std::to_string(j) + ")",
                  static_cast<double>(-u + s + y - 1 + w));
            obj += in.lambda[static_cast<std::size_t>(i)] * u *
                   static_cast<double>(in.cost[k][j]);
          }
      for (int i = 0; i < M - 1; ++i) {
        double lhs = 0.0;
        for (int k = 0; k < M; ++k)
          for (int j = 0; j < M; ++j)
            lhs += static_cast<double>(in.cost[k][j]) *
                   (U(i, k, j) - U(i + 1, k, j));
        std::int64_t vi = 0;
        for (int k = 0; k < lsc; ++k)
          vi += static_cast<std::int64_t>(V(i, k)) << k;
        check(sol, "rank monotonicity " + std::to_string(i),
              lhs + static_cast<double>(vi));
      }
      if (sol.feasible) sol.original_objective = obj;
      break;
    }
    case Family::Dmpflp: {
      const auto& in = std::get<DmpflpInstance>(pin);
      const int n = in.n, T = in.periods;
      const int ly = slack_bits(n);
      std::vector<int> lu(static_cast<std::size_t>(T));
      std::vector<int> uoff(static_cast<std::size_t>(T));
      int total_u = 0;
      for (int t = 0; t < T; ++t) {
        lu[static_cast<std::size_t>(t)] = slack_bits(in.open_limit[t]);
        uoff[static_cast<std::size_t>(t)] = total_u;
        total_u += lu[static_cast<std::size_t>(t)];
      }
      auto X = [n, &bit](int t, int i, int j) {
        return bit((t * n + i) * n + j);
      };
      auto ZO = [n, T, &bit](int t, int i) {
        return bit(n * n * T + t * n + i);
      };
      auto ZC = [n, T, &bit](int t, int i) {
        return bit(n * n * T + n * T + t * n + i);
      };
      auto YS = [n, T, ly, &bit](int t, int i, int k) {
        return bit(n * n * T + 2 * n * T + (t * n + i) * ly + k);
      };
      auto U = [n, T, ly, &uoff, &bit](int t, int k) {
        return bit(n * n * T + 2 * n * T + n * T * ly +
                   uoff[static_cast<std::size_t>(t)] + k);
      };
      double obj = 0.0;
      for (int t = 0; t < T; ++t) {
        int operating = 0;
        for (int j = 0; j < n; ++j) {
          int assigned = 0;
          for (int i = 0; i < n; ++i)
            if (X(t, i, j)) {
              ++assigned;
              obj += in.cost[static_cast<std::size_t>(t)]
                            [static_cast<std::size_t>(i)]
                            [static_cast<std::size_t>(j)];
            }
          check(sol,
                "assignment period " + std::to_string(t) + " client " +
                    std::to_string(j),
                static_cast<double>(assigned - 1));
        }
        for (int i = 0; i < n; ++i) {
          if (X(t, i, i)) ++operating;
          int served = 0;
          for (int j = 0; j < n; ++j) served += X(t, i, j);
          std::int64_t yit = 0;
          for (int k = 0; k < ly; ++k)
            yit += static_cast<std::int64_t>(YS(t, i, k)) << k;
          check(sol,
                "service coupling period " + std::to_string(t) + " site " +
                    std::to_string(i),
                static_cast<double>(n * X(t, i, i) - served - yit));
          if (ZO(t, i))
            obj += in.open_cost[static_cast<std::size_t>(i)]
                               [static_cast<std::size_t>(t)];
          if (ZC(t, i))
            obj += in.close_cost[static_cast<std::size_t>(i)]
                                [static_cast<std::size_t>(t)];
        }
        check(sol, "operating count period " + std::to_string(t),
              static_cast<double>(operating - in.p));
        int opened_t = 0;
        for (int i = 0; i < n; ++i) opened_t += ZO(t, i);
        std::int64_t ut = 0;
        for (int k = 0; k < lu[static_cast<std::size_t>(t)]; ++k)
          ut += static_cast<std::int64_t>(U(t, k)) << k;
        check(sol, "opening limit period " + std::to_string(t),
              static_cast<double>(in.open_limit[t] - ut - opened_t));
      }
      for (int t = 1; t < T; ++t)
        for (int i = 0; i < n; ++i)
          check(sol,
                "balance period " + std::to_string(t) + " site " +
                    std::to_string(i),
                static_cast<double>(X(t, i, i) - X(t - 1, i, i) +
                                    ZC(t - 1, i) - ZO(t, i)));
      for (int i = 0; i < n; ++i)
        if (X(T - 1, i, i)) sol.opened.push_back(i);  // final-period sites
      if (sol.feasible) sol.original_objective = obj;
      break;
    }
  }
  return sol;
}

}  // namespace locqubo
