#pragma once

// Dense bounded-variable primal simplex over exact rationals. The linear
// programs produced by the relaxation layer are tiny (tens of columns), so a
// full tableau with Bland's anti-cycling rule is both sufficient and
// immune to round-off: integrality of an optimum can be asserted exactly.

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "locqubo/errors.hpp"

namespace locqubo {

using Rational = boost::multiprecision::cpp_rational;

// min c.x  s.t.  eq_rows.x = eq_rhs,  le_rows.x <= le_rhs,  x in [0,1]^n
struct LinearProgram {
  int n_vars = 0;
  std::vector<Rational> objective;
  std::vector<std::vector<Rational>> eq_rows;
  std::vector<Rational> eq_rhs;
  std::vector<std::vector<Rational>> le_rows;
  std::vector<Rational> le_rhs;

  void validate() const {
    if (n_vars <= 0) throw ValidationError("n_vars: must be positive");
    if (static_cast<int>(objective.size()) != n_vars)
      throw ValidationError("objective: length must equal n_vars");
    if (eq_rows.size() != eq_rhs.size())
      throw ValidationError("eq_rhs: one entry per equality row");
    if (le_rows.size() != le_rhs.size())
      throw ValidationError("le_rhs: one entry per inequality row");
    for (const auto& r : eq_rows)
      if (static_cast<int>(r.size()) != n_vars)
        throw ValidationError("eq_rows: row length must equal n_vars");
    for (const auto& r : le_rows)
      if (static_cast<int>(r.size()) != n_vars)
        throw ValidationError("le_rows: row length must equal n_vars");
  }
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
  LpStatus status = LpStatus::Optimal;
  std::vector<Rational> x;  // structural variables only
  Rational objective = 0;
};

namespace detail {

// Rows are sorted before pivoting so the returned basic solution depends only
// on the set of constraints, not on the order they were assembled in.
inline void canonicalize_rows(std::vector<std::vector<Rational>>& rows,
                              std::vector<Rational>& rhs) {
  std::vector<std::size_t> order(rows.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (rows[a] != rows[b]) return rows[a] < rows[b];
    return rhs[a] < rhs[b];
  });
  std::vector<std::vector<Rational>> r2;
  std::vector<Rational> b2;
  r2.reserve(rows.size());
  b2.reserve(rhs.size());
  for (std::size_t i : order) {
    r2.push_back(std::move(rows[i]));
    b2.push_back(std::move(rhs[i]));
  }
  rows = std::move(r2);
  rhs = std::move(b2);
}

class BoundedSimplex {
 public:
  // vars: (lower, upper) pairs; upper may be absent (unbounded above)
  BoundedSimplex(std::vector<std::vector<Rational>> rows,
                 std::vector<Rational> rhs,
                 std::vector<std::pair<Rational, std::optional<Rational>>> bnds)
      : a_(std::move(rows)),
        bounds_(std::move(bnds)),
        m_(static_cast<int>(a_.size())),
        n_(static_cast<int>(bounds_.size())) {
    state_.assign(static_cast<std::size_t>(n_), AtLower);
    value_.resize(static_cast<std::size_t>(n_));
    for (int j = 0; j < n_; ++j)
      value_[static_cast<std::size_t>(j)] = lower(j);
    // one artificial per row, oriented so it starts nonnegative
    basic_.resize(static_cast<std::size_t>(m_));
    beta_.resize(static_cast<std::size_t>(m_));
    for (int i = 0; i < m_; ++i) {
      Rational resid = rhs[static_cast<std::size_t>(i)];
      for (int j = 0; j < n_; ++j)
        resid -= a_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] *
                 value_[static_cast<std::size_t>(j)];
      Rational sign = (resid < 0) ? Rational(-1) : Rational(1);
      for (auto& row : a_)
        row.push_back(&row == &a_[static_cast<std::size_t>(i)] ? sign
                                                               : Rational(0));
      bounds_.push_back({Rational(0), std::nullopt});
      state_.push_back(Basic);
      value_.push_back(0);
      basic_[static_cast<std::size_t>(i)] = n_ + i;
      beta_[static_cast<std::size_t>(i)] = resid * sign;
    }
    first_artificial_ = n_;
    n_ = static_cast<int>(bounds_.size());
  }

  LpStatus optimize(const std::vector<Rational>& structural_cost) {
    // phase 1: minimize the sum of artificials
    std::vector<Rational> c1(static_cast<std::size_t>(n_), 0);
    for (int j = first_artificial_; j < n_; ++j)
      c1[static_cast<std::size_t>(j)] = 1;
    if (run(c1) == LpStatus::Unbounded)
      throw ValidationError("simplex: phase 1 unbounded");
    if (objective_value(c1) != 0) return LpStatus::Infeasible;
    // phase 2: pin artificials at zero and optimize the real objective
    for (int j = first_artificial_; j < n_; ++j)
      bounds_[static_cast<std::size_t>(j)].second = Rational(0);
    std::vector<Rational> c2(static_cast<std::size_t>(n_), 0);
    for (std::size_t j = 0; j < structural_cost.size(); ++j) c2[j] = structural_cost[j];
    return run(c2);
  }

  Rational variable(int j) const {
    if (state_[static_cast<std::size_t>(j)] == Basic)
      for (int i = 0; i < m_; ++i)
        if (basic_[static_cast<std::size_t>(i)] == j)
          return beta_[static_cast<std::size_t>(i)];
    return value_[static_cast<std::size_t>(j)];
  }

 private:
  enum State { AtLower, AtUpper, Basic };

  const Rational& lower(int j) const {
    return bounds_[static_cast<std::size_t>(j)].first;
  }
  const std::optional<Rational>& upper(int j) const {
    return bounds_[static_cast<std::size_t>(j)].second;
  }

  Rational objective_value(const std::vector<Rational>& c) const {
    Rational v = 0;
    for (int j = 0; j < n_; ++j) v += c[static_cast<std::size_t>(j)] * variable(j);
    return v;
  }

  LpStatus run(const std::vector<Rational>& c) {
    for (;;) {
      // simplex multipliers via the maintained tableau: d_j = c_j - c_B.T_j
      std::vector<Rational> cb(static_cast<std::size_t>(m_));
      for (int i = 0; i < m_; ++i)
        cb[static_cast<std::size_t>(i)] =
            c[static_cast<std::size_t>(basic_[static_cast<std::size_t>(i)])];
      int enter = -1;
      int direction = 0;
      for (int j = 0; j < n_ && enter < 0; ++j) {
        if (state_[static_cast<std::size_t>(j)] == Basic) continue;
        Rational d = c[static_cast<std::size_t>(j)];
        for (int i = 0; i < m_; ++i)
          d -= cb[static_cast<std::size_t>(i)] *
               a_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        if (state_[static_cast<std::size_t>(j)] == AtLower && d < 0) {
          enter = j;
          direction = +1;
        } else if (state_[static_cast<std::size_t>(j)] == AtUpper && d > 0) {
          enter = j;
          direction = -1;
        }
      }
      if (enter < 0) return LpStatus::Optimal;

      // ratio test: smallest step at which some variable hits a bound
      std::optional<Rational> step;
      int leave_row = -1;        // -1: the entering variable itself flips bound
      bool leave_to_upper = false;
      if (upper(enter))
        step = *upper(enter) - lower(enter);
      for (int i = 0; i < m_; ++i) {
        const Rational coef =
            direction *
            a_[static_cast<std::size_t>(i)][static_cast<std::size_t>(enter)];
        const int bj = basic_[static_cast<std::size_t>(i)];
        std::optional<Rational> limit;
        bool to_upper = false;
        if (coef > 0) {
          limit = (beta_[static_cast<std::size_t>(i)] - lower(bj)) / coef;
        } else if (coef < 0 && upper(bj)) {
          limit = (beta_[static_cast<std::size_t>(i)] - *upper(bj)) / coef;
          to_upper = true;
        }
        if (!limit) continue;
        // Bland tie-break: keep the row whose basic variable has least index
        if (!step || *limit < *step ||
            (leave_row >= 0 && *limit == *step &&
             bj < basic_[static_cast<std::size_t>(leave_row)])) {
          if (!step || *limit <= *step) {
            step = *limit;
            leave_row = i;
            leave_to_upper = to_upper;
          }
        }
      }
      if (!step) return LpStatus::Unbounded;

      // apply the step
      for (int i = 0; i < m_; ++i)
        beta_[static_cast<std::size_t>(i)] -=
            direction * (*step) *
            a_[static_cast<std::size_t>(i)][static_cast<std::size_t>(enter)];
      if (leave_row < 0) {  // bound flip, basis unchanged
        state_[static_cast<std::size_t>(enter)] =
            (direction > 0) ? AtUpper : AtLower;
        value_[static_cast<std::size_t>(enter)] =
            (direction > 0) ? *upper(enter) : lower(enter);
        continue;
      }
      const int leave = basic_[static_cast<std::size_t>(leave_row)];
      const Rational enter_value =
          value_[static_cast<std::size_t>(enter)] + direction * (*step);
      pivot(leave_row, enter);
      basic_[static_cast<std::size_t>(leave_row)] = enter;
      state_[static_cast<std::size_t>(enter)] = Basic;
      beta_[static_cast<std::size_t>(leave_row)] = enter_value;
      state_[static_cast<std::size_t>(leave)] =
          leave_to_upper ? AtUpper : AtLower;
      value_[static_cast<std::size_t>(leave)] =
          leave_to_upper ? *upper(leave) : lower(leave);
    }
  }

  void pivot(int r, int col) {
    auto& prow = a_[static_cast<std::size_t>(r)];
    const Rational piv = prow[static_cast<std::size_t>(col)];
    for (auto& v : prow) v /= piv;
    for (int i = 0; i < m_; ++i) {
      if (i == r) continue;
      auto& row = a_[static_cast<std::size_t>(i)];
      const Rational f = row[static_cast<std::size_t>(col)];
      if (f == 0) continue;
      for (int j = 0; j < n_; ++j)
        row[static_cast<std::size_t>(j)] -=
            f * prow[static_cast<std::size_t>(j)];
    }
  }

  std::vector<std::vector<Rational>> a_;
  std::vector<std::pair<Rational, std::optional<Rational>>> bounds_;
  int m_;
  int n_;
  int first_artificial_ = 0;
  std::vector<State> state_;
  std::vector<Rational> value_;  // nonbasic resting values
  std::vector<int> basic_;
  std::vector<Rational> beta_;  // current basic values, row-aligned
};

}  // namespace detail

inline LpSolution solve_lp(const LinearProgram& lp_in) {
  lp_in.validate();
  LinearProgram lp = lp_in;
  detail::canonicalize_rows(lp.eq_rows, lp.eq_rhs);
  detail::canonicalize_rows(lp.le_rows, lp.le_rhs);

  const int n = lp.n_vars;
  const int n_slack = static_cast<int>(lp.le_rows.size());
  std::vector<std::vector<Rational>> rows;
  std::vector<Rational> rhs;
  for (std::size_t r = 0; r < lp.eq_rows.size(); ++r) {
    auto row = lp.eq_rows[r];
    row.resize(static_cast<std::size_t>(n + n_slack), 0);
    rows.push_back(std::move(row));
    rhs.push_back(lp.eq_rhs[r]);
  }
  for (int r = 0; r < n_slack; ++r) {
    auto row = lp.le_rows[static_cast<std::size_t>(r)];
    row.resize(static_cast<std::size_t>(n + n_slack), 0);
    row[static_cast<std::size_t>(n + r)] = 1;  // le_row.x + slack = rhs
    rows.push_back(std::move(row));
    rhs.push_back(lp.le_rhs[static_cast<std::size_t>(r)]);
  }
  std::vector<std::pair<Rational, std::optional<Rational>>> bounds;
  for (int j = 0; j < n; ++j) bounds.push_back({Rational(0), Rational(1)});
  for (int r = 0; r < n_slack; ++r)
    bounds.push_back({Rational(0), std::nullopt});

  detail::BoundedSimplex simplex(std::move(rows), std::move(rhs),
                                 std::move(bounds));
  LpSolution sol;
  sol.status = simplex.optimize(lp.objective);
  if (sol.status == LpStatus::Infeasible)
    throw InfeasibleError("solve_lp: constraints are infeasible");
  if (sol.status == LpStatus::Unbounded)
    throw ValidationError("solve_lp: unbounded (inconsistent relaxation)");
  sol.x.resize(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    sol.x[static_cast<std::size_t>(j)] = simplex.variable(j);
    sol.objective +=
        lp.objective[static_cast<std::size_t>(j)] * sol.x[static_cast<std::size_t>(j)];
  }
  return sol;
}

}  // namespace locqubo
