#pragma once

// Problem-instance data types for the six discrete location problems,
// the built-in benchmark instances, JSON I/O, and seeded random generation.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "locqubo/errors.hpp"

namespace locqubo {

using Matrix = std::vector<std::vector<double>>;

enum class Family { PMedian, PCenter, Fcflp, Gap, Domp, Dmpflp };

inline std::string family_name(Family f) {
  switch (f) {
    case Family::PMedian: return "pmedian";
    case Family::PCenter: return "pcenter";
    case Family::Fcflp: return "fcflp";
    case Family::Gap: return "gap";
    case Family::Domp: return "domp";
    case Family::Dmpflp: return "dmpflp";
  }
  return "?";
}

inline Family family_from_name(const std::string& s) {
  if (s == "pmedian") return Family::PMedian;
  if (s == "pcenter") return Family::PCenter;
  if (s == "fcflp") return Family::Fcflp;
  if (s == "gap") return Family::Gap;
  if (s == "domp") return Family::Domp;
  if (s == "dmpflp") return Family::Dmpflp;
  throw ParseError("unknown problem family: " + s);
}

namespace detail {

inline bool is_integral(double v) { return v == std::floor(v); }

inline void check_matrix(const Matrix& m, std::size_t rows, std::size_t cols,
                         const char* name) {
  if (m.size() != rows)
    throw ValidationError(std::string(name) + ": expected " +
                          std::to_string(rows) + " rows");
  for (const auto& row : m)
    if (row.size() != cols)
      throw ValidationError(std::string(name) + ": ragged or wrong-width row");
}

inline void check_nonneg(const Matrix& m, const char* name) {
  for (const auto& row : m)
    for (double v : row)
      if (v < 0)
        throw ValidationError(std::string(name) + ": negative entry");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Instance types. validate() throws ValidationError naming the offending
// field and returns non-fatal warnings (e.g. the FCFLP aggregate-capacity
// check, which the model assumes but never enforces structurally).
// ---------------------------------------------------------------------------

struct PMedianInstance {
  int n = 0;  // sites == clients
  int p = 0;  // facilities to open
  std::vector<std::int64_t> demand;  // d_j >= 1
  std::vector<std::vector<std::int64_t>> cost;  // c_ij, row i = facility

  std::vector<std::string> validate() const {
    if (n < 2) throw ValidationError("n: must be >= 2");
    if (p < 1 || p >= n) throw ValidationError("p: requires 1 <= p < n");
    if (static_cast<int>(demand.size()) != n)
      throw ValidationError("demand: expected n entries");
    for (auto d : demand)
      if (d < 1) throw ValidationError("demand: all d_j must be >= 1");
    if (static_cast<int>(cost.size()) != n)
      throw ValidationError("cost: expected n rows");
    for (const auto& row : cost) {
      if (static_cast<int>(row.size()) != n)
        throw ValidationError("cost: expected n columns");
      for (auto c : row)
        if (c < 0) throw ValidationError("cost: all c_ij must be >= 0");
    }
    return {};
  }
};

struct PCenterInstance {
  int n = 0;
  int p = 0;
  std::vector<std::vector<std::int64_t>> distance;  // d_ij >= 0

  std::int64_t d_max() const {
    std::int64_t m = 0;
    for (const auto& row : distance)
      for (auto v : row) m = std::max(m, v);
    return m;
  }
  std::int64_t d_min() const {
    std::int64_t m = distance.empty() ? 0 : distance[0][0];
    for (const auto& row : distance)
      for (auto v : row) m = std::min(m, v);
    return m;
  }

  std::vector<std::string> validate() const {
    if (n < 2) throw ValidationError("n: must be >= 2");
    if (p < 1 || p >= n) throw ValidationError("p: requires 1 <= p < n");
    if (static_cast<int>(distance.size()) != n)
      throw ValidationError("distance: expected n rows");
    for (const auto& row : distance) {
      if (static_cast<int>(row.size()) != n)
        throw ValidationError("distance: expected n columns");
      for (auto v : row)
        if (v < 0) throw ValidationError("distance: all d_ij must be >= 0");
    }
    return {};
  }
};

struct FcflpInstance {
  int n = 0;
  std::vector<std::int64_t> demand;    // d_j >= 1
  std::vector<std::int64_t> capacity;  // q_i >= 1
  std::vector<double> fixed_cost;      // f_i >= 0
  Matrix cost;                         // c_ij >= 0

  std::vector<std::string> validate() const {
    std::vector<std::string> warnings;
    if (n < 2) throw ValidationError("n: must be >= 2");
    if (static_cast<int>(demand.size()) != n)
      throw ValidationError("demand: expected n entries");
    for (auto d : demand)
      if (d < 1) throw ValidationError("demand: all d_j must be >= 1");
    if (static_cast<int>(capacity.size()) != n)
      throw ValidationError("capacity: expected n entries");
    for (auto q : capacity)
      if (q < 1) throw ValidationError("capacity: all q_i must be >= 1");
    if (static_cast<int>(fixed_cost.size()) != n)
      throw ValidationError("fixed_cost: expected n entries");
    for (auto f : fixed_cost)
      if (f < 0) throw ValidationError("fixed_cost: all f_i must be >= 0");
    detail::check_matrix(cost, n, n, "cost");
    detail::check_nonneg(cost, "cost");
    std::int64_t qsum = 0, dsum = 0;
    for (auto q : capacity) qsum += q;
    for (auto d : demand) dsum += d;
    if (qsum < dsum)
      warnings.push_back("total capacity " + std::to_string(qsum) +
                         " < total demand " + std::to_string(dsum) +
                         ": instance is infeasible");
    bool integral = true;
    for (auto f : fixed_cost) integral = integral && detail::is_integral(f);
    for (const auto& row : cost)
      for (double c : row) integral = integral && detail::is_integral(c);
    if (!integral)
      warnings.push_back(
          "non-integral costs: exact matrix oracles assume integer data");
    return warnings;
  }
};

struct GapInstance {
  int n = 0;                       // total sites (clients = {1..n})
  std::vector<int> open_sites;     // S, 0-based, sorted, nonempty
  std::vector<std::int64_t> demand;    // d_j, one per client
  std::vector<std::int64_t> capacity;  // q_i, one per open site (S order)
  std::vector<std::vector<std::int64_t>> cost;  // c_ij, one row per open site

  std::vector<std::string> validate() const {
    if (n < 1) throw ValidationError("n: must be >= 1");
    if (open_sites.empty()) throw ValidationError("open_sites: must be nonempty");
    for (std::size_t k = 0; k < open_sites.size(); ++k) {
      if (open_sites[k] < 0 || open_sites[k] >= n)
        throw ValidationError("open_sites: index out of range");
      if (k > 0 && open_sites[k] <= open_sites[k - 1])
        throw ValidationError("open_sites: must be strictly increasing");
    }
    if (static_cast<int>(demand.size()) != n)
      throw ValidationError("demand: expected n entries");
    for (auto d : demand)
      if (d < 1) throw ValidationError("demand: all d_j must be >= 1");
    if (capacity.size() != open_sites.size())
      throw ValidationError("capacity: expected one entry per open site");
    for (auto q : capacity)
      if (q < 1) throw ValidationError("capacity: all q_i must be >= 1");
    if (cost.size() != open_sites.size())
      throw ValidationError("cost: expected one row per open site");
    for (const auto& row : cost) {
      if (static_cast<int>(row.size()) != n)
        throw ValidationError("cost: expected n columns");
      for (auto c : row)
        if (c < 0) throw ValidationError("cost: all c_ij must be >= 0");
    }
    return {};
  }
};

struct DompInstance {
  int m = 0;          // sites == clients (M)
  int n_open = 0;     // facilities to open (N)
  std::vector<std::vector<std::int64_t>> cost;  // c_kj >= 0
  std::vector<double> lambda;                   // rank weights, lambda_i >= 0

  std::int64_t cost_sum() const {
    std::int64_t s = 0;
    for (const auto& row : cost)
      for (auto v : row) s += v;
    return s;
  }

  std::vector<std::string> validate() const {
    if (m < 2) throw ValidationError("m: must be >= 2");
    if (n_open < 1 || n_open >= m)
      throw ValidationError("n_open: requires 1 <= N < M");
    if (static_cast<int>(cost.size()) != m)
      throw ValidationError("cost: expected M rows");
    for (const auto& row : cost) {
      if (static_cast<int>(row.size()) != m)
        throw ValidationError("cost: expected M columns");
      for (auto c : row)
        if (c < 0) throw ValidationError("cost: all c_kj must be >= 0");
    }
    if (static_cast<int>(lambda.size()) != m)
      throw ValidationError("lambda: expected M entries");
    for (auto l : lambda)
      if (l < 0) throw ValidationError("lambda: all lambda_i must be >= 0");
    return {};
  }
};

struct DmpflpInstance {
  int periods = 0;  // T
  int n = 0;        // sites == clients
  int p = 0;        // facilities operating per period
  std::vector<Matrix> cost;       // cost[t][i][j]
  Matrix open_cost;               // g[i][t]
  Matrix close_cost;              // h[i][t]
  std::vector<std::int64_t> open_limit;  // m_t >= 0

  std::vector<std::string> validate() const {
    if (periods < 1) throw ValidationError("periods: must be >= 1");
    if (n < 2) throw ValidationError("n: must be >= 2");
    if (p < 1 || p >= n) throw ValidationError("p: requires 1 <= p < n");
    if (static_cast<int>(cost.size()) != periods)
      throw ValidationError("cost: expected T period matrices");
    for (const auto& m : cost) {
      detail::check_matrix(m, static_cast<std::size_t>(n),
                           static_cast<std::size_t>(n), "cost");
      detail::check_nonneg(m, "cost");
    }
    detail::check_matrix(open_cost, static_cast<std::size_t>(n),
                         static_cast<std::size_t>(periods), "open_cost");
    detail::check_nonneg(open_cost, "open_cost");
    detail::check_matrix(close_cost, static_cast<std::size_t>(n),
                         static_cast<std::size_t>(periods), "close_cost");
    detail::check_nonneg(close_cost, "close_cost");
    if (static_cast<int>(open_limit.size()) != periods)
      throw ValidationError("open_limit: expected T entries");
    for (auto m : open_limit)
      if (m < 0) throw ValidationError("open_limit: all m_t must be >= 0");
    return {};
  }
};

using ProblemInstance =
    std::variant<PMedianInstance, PCenterInstance, FcflpInstance, GapInstance,
                 DompInstance, DmpflpInstance>;

inline Family family_of(const ProblemInstance& inst) {
  return std::visit(
      [](const auto& x) -> Family {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, PMedianInstance>) return Family::PMedian;
        else if constexpr (std::is_same_v<T, PCenterInstance>) return Family::PCenter;
        else if constexpr (std::is_same_v<T, FcflpInstance>) return Family::Fcflp;
        else if constexpr (std::is_same_v<T, GapInstance>) return Family::Gap;
        else if constexpr (std::is_same_v<T, DompInstance>) return Family::Domp;
        else return Family::Dmpflp;
      },
      inst);
}

inline std::vector<std::string> validate(const ProblemInstance& inst) {
  return std::visit([](const auto& x) { return x.validate(); }, inst);
}

// ---------------------------------------------------------------------------
// JSON I/O. Schema keys are fixed per family; unknown keys are rejected.
// ---------------------------------------------------------------------------

namespace detail {

using nlohmann::json;

inline void reject_unknown_keys(const json& j,
                                std::initializer_list<const char*> allowed) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed) ok = ok || (it.key() == k);
    if (!ok) throw ParseError("unknown key in instance JSON: " + it.key());
  }
}

template <typename T>
T require(const json& j, const char* key) {
  if (!j.contains(key))
    throw ParseError(std::string("missing key in instance JSON: ") + key);
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad value for key '") + key + "': " + e.what());
  }
}

inline std::vector<std::int64_t> require_int_vec(const json& j, const char* key) {
  auto vals = require<std::vector<double>>(j, key);
  std::vector<std::int64_t> out;
  out.reserve(vals.size());
  for (double v : vals) {
    if (!is_integral(v))
      throw ParseError(std::string("key '") + key + "' must hold integers");
    out.push_back(static_cast<std::int64_t>(v));
  }
  return out;
}

inline std::vector<std::vector<std::int64_t>> require_int_mat(const json& j,
                                                              const char* key) {
  auto vals = require<Matrix>(j, key);
  std::vector<std::vector<std::int64_t>> out(vals.size());
  for (std::size_t i = 0; i < vals.size(); ++i)
    for (double v : vals[i]) {
      if (!is_integral(v))
        throw ParseError(std::string("key '") + key + "' must hold integers");
      out[i].push_back(static_cast<std::int64_t>(v));
    }
  return out;
}

}  // namespace detail

inline nlohmann::json to_json(const ProblemInstance& inst) {
  using nlohmann::json;
  json j;
  j["family"] = family_name(family_of(inst));
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, PMedianInstance>) {
          j["n"] = x.n;
          j["p"] = x.p;
          j["demand"] = x.demand;
          j["cost"] = x.cost;
        } else if constexpr (std::is_same_v<T, PCenterInstance>) {
          j["n"] = x.n;
          j["p"] = x.p;
          j["distance"] = x.distance;
        } else if constexpr (std::is_same_v<T, FcflpInstance>) {
          j["n"] = x.n;
          j["demand"] = x.demand;
          j["capacity"] = x.capacity;
          j["fixed_cost"] = x.fixed_cost;
          j["cost"] = x.cost;
        } else if constexpr (std::is_same_v<T, GapInstance>) {
          j["n"] = x.n;
          j["open_sites"] = x.open_sites;
          j["demand"] = x.demand;
          j["capacity"] = x.capacity;
          j["cost"] = x.cost;
        } else if constexpr (std::is_same_v<T, DompInstance>) {
          j["n"] = x.m;
          j["p"] = x.n_open;
          j["cost"] = x.cost;
          j["lambda"] = x.lambda;
        } else {
          j["n"] = x.n;
          j["p"] = x.p;
          j["periods"] = x.periods;
          j["cost"] = x.cost;
          j["open_cost"] = x.open_cost;
          j["close_cost"] = x.close_cost;
          j["open_limit"] = x.open_limit;
        }
      },
      inst);
  return j;
}

inline ProblemInstance instance_from_json(const nlohmann::json& j) {
  using detail::require;
  if (!j.is_object()) throw ParseError("instance JSON must be an object");
  Family fam = family_from_name(require<std::string>(j, "family"));
  ProblemInstance inst;
  switch (fam) {
    case Family::PMedian: {
      detail::reject_unknown_keys(j, {"family", "n", "p", "demand", "cost"});
      PMedianInstance x;
      x.n = require<int>(j, "n");
      x.p = require<int>(j, "p");
      x.demand = detail::require_int_vec(j, "demand");
      x.cost = detail::require_int_mat(j, "cost");
      inst = x;
      break;
    }
    case Family::PCenter: {
      detail::reject_unknown_keys(j, {"family", "n", "p", "distance"});
      PCenterInstance x;
      x.n = require<int>(j, "n");
      x.p = require<int>(j, "p");
      x.distance = detail::require_int_mat(j, "distance");
      inst = x;
      break;
    }
    case Family::Fcflp: {
      detail::reject_unknown_keys(
          j, {"family", "n", "demand", "capacity", "fixed_cost", "cost"});
      FcflpInstance x;
      x.n = require<int>(j, "n");
      x.demand = detail::require_int_vec(j, "demand");
      x.capacity = detail::require_int_vec(j, "capacity");
      x.fixed_cost = require<std::vector<double>>(j, "fixed_cost");
      x.cost = require<Matrix>(j, "cost");
      inst = x;
      break;
    }
    case Family::Gap: {
      detail::reject_unknown_keys(
          j, {"family", "n", "open_sites", "demand", "capacity", "cost"});
      GapInstance x;
      x.n = require<int>(j, "n");
      x.open_sites = require<std::vector<int>>(j, "open_sites");
      x.demand = detail::require_int_vec(j, "demand");
      x.capacity = detail::require_int_vec(j, "capacity");
      x.cost = detail::require_int_mat(j, "cost");
      inst = x;
      break;
    }
    case Family::Domp: {
      detail::reject_unknown_keys(j, {"family", "n", "p", "cost", "lambda"});
      DompInstance x;
      x.m = require<int>(j, "n");
      x.n_open = require<int>(j, "p");
      x.cost = detail::require_int_mat(j, "cost");
      x.lambda = require<std::vector<double>>(j, "lambda");
      inst = x;
      break;
    }
    case Family::Dmpflp: {
      detail::reject_unknown_keys(j, {"family", "n", "p", "periods", "cost",
                                      "open_cost", "close_cost", "open_limit"});
      DmpflpInstance x;
      x.n = require<int>(j, "n");
      x.p = require<int>(j, "p");
      x.periods = require<int>(j, "periods");
      x.cost = require<std::vector<Matrix>>(j, "cost");
      x.open_cost = require<Matrix>(j, "open_cost");
      x.close_cost = require<Matrix>(j, "close_cost");
      x.open_limit = detail::require_int_vec(j, "open_limit");
      inst = x;
      break;
    }
  }
  validate(inst);
  return inst;
}

inline ProblemInstance load_instance(const std::string& path,
                                     std::optional<Family> expected = {}) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open instance file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("malformed JSON in " + path + ": " + e.what());
  }
  ProblemInstance inst = instance_from_json(j);
  if (expected && family_of(inst) != *expected)
    throw ParseError("instance family mismatch in " + path);
  return inst;
}

// ---------------------------------------------------------------------------
// Built-in benchmark instances (embedded so the oracle tests cannot drift
// from the shipped data).
// ---------------------------------------------------------------------------

namespace builtin_data {

struct PMedianRow {
  std::vector<std::int64_t> d;
  std::vector<std::vector<std::int64_t>> c;
};

inline const std::vector<PMedianRow>& pmedian3() {
  static const std::vector<PMedianRow> rows = {
      {{9, 8, 4}, {{1, 9, 1}, {8, 0, 2}, {8, 7, 0}}},
      {{9, 7, 4}, {{1, 5, 3}, {2, 0, 6}, {9, 4, 0}}},
      {{3, 5, 3}, {{1, 2, 4}, {6, 0, 3}, {4, 3, 0}}},
      {{7, 7, 8}, {{1, 6, 3}, {3, 1, 9}, {5, 2, 0}}},
      {{7, 3, 5}, {{0, 5, 9}, {4, 1, 9}, {7, 3, 1}}},
      {{4, 4, 9}, {{1, 4, 2}, {3, 1, 6}, {6, 1, 1}}},
      {{8, 6, 6}, {{1, 5, 4}, {5, 1, 6}, {8, 5, 0}}},
      {{9, 3, 5}, {{1, 7, 5}, {4, 1, 7}, {9, 4, 1}}},
      {{6, 5, 7}, {{1, 6, 5}, {3, 1, 2}, {7, 2, 1}}},
      {{8, 5, 7}, {{0, 1, 9}, {2, 0, 1}, {5, 5, 0}}},
  };
  return rows;
}

inline const std::vector<PMedianRow>& pmedian4() {
  static const std::vector<PMedianRow> rows = {
      {{4, 4, 13, 11},
       {{2, 11, 13, 6}, {14, 0, 15, 11}, {5, 14, 1, 6}, {5, 12, 15, 2}}},
      {{6, 15, 8, 12},
       {{0, 15, 3, 2}, {2, 1, 5, 7}, {3, 13, 1, 6}, {5, 3, 15, 2}}},
      {{7, 11, 12, 6},
       {{1, 9, 9, 6}, {3, 1, 12, 12}, {10, 11, 1, 15}, {3, 3, 6, 2}}},
      {{7, 9, 4, 4},
       {{0, 5, 3, 11}, {12, 1, 14, 11}, {16, 5, 1, 3}, {13, 4, 12, 1}}},
      {{9, 11, 15, 8},
       {{1, 11, 6, 11}, {11, 1, 15, 10}, {10, 2, 2, 10}, {11, 12, 9, 2}}},
      {{10, 12, 13, 16},
       {{0, 9, 12, 16}, {16, 0, 4, 2}, {6, 12, 0, 10}, {10, 2, 5, 0}}},
      {{9, 7, 9, 15},
       {{2, 8, 7, 4}, {10, 2, 8, 12}, {9, 15, 2, 16}, {9, 13, 16, 0}}},
      {{16, 10, 16, 12},
       {{2, 3, 8, 16}, {10, 1, 14, 3}, {2, 12, 2, 9}, {4, 10, 12, 2}}},
      {{8, 10, 7, 15},
       {{1, 2, 15, 15}, {11, 1, 7, 11}, {10, 2, 0, 13}, {16, 7, 13, 2}}},
      {{6, 8, 11, 5},
       {{2, 7, 13, 2}, {15, 0, 3, 8}, {6, 12, 1, 2}, {2, 7, 13, 2}}},
  };
  return rows;
}

struct FcflpRow {
  std::vector<std::int64_t> d;
  std::vector<std::vector<std::int64_t>> c;
  std::vector<std::int64_t> f;
  std::vector<std::int64_t> q;
};

inline const std::vector<FcflpRow>& fcflp3() {
  static const std::vector<FcflpRow> rows = {
      {{3, 8, 10}, {{0, 4, 4}, {9, 0, 2}, {5, 5, 0}}, {25, 9, 17}, {12, 10, 10}},
      {{7, 10, 6}, {{0, 2, 7}, {1, 0, 6}, {3, 7, 0}}, {17, 17, 1}, {10, 13, 12}},
      {{3, 8, 9}, {{1, 3, 5}, {7, 1, 4}, {3, 8, 1}}, {16, 9, 2}, {12, 13, 11}},
      {{8, 10, 3}, {{0, 1, 9}, {9, 0, 5}, {2, 4, 0}}, {9, 2, 3}, {15, 10, 16}},
      {{6, 5, 8}, {{1, 4, 4}, {8, 0, 6}, {8, 8, 1}}, {10, 17, 26}, {8, 13, 9}},
      {{8, 3, 3}, {{0, 2, 4}, {2, 0, 8}, {7, 8, 1}}, {8, 23, 11}, {13, 9, 10}},
      {{6, 10, 7}, {{1, 5, 4}, {3, 1, 1}, {8, 7, 1}}, {16, 2, 23}, {10, 14, 12}},
      {{4, 8, 10}, {{0, 4, 5}, {2, 1, 2}, {2, 9, 1}}, {26, 13, 11}, {13, 14, 10}},
      {{4, 10, 3}, {{1, 6, 4}, {8, 1, 4}, {9, 6, 1}}, {6, 19, 1}, {14, 10, 10}},
      {{7, 5, 9}, {{1, 5, 1}, {7, 1, 8}, {8, 8, 0}}, {2, 6, 15}, {13, 10, 9}},
  };
  return rows;
}

}  // namespace builtin_data

// Returns the ten benchmark instances for (family, size), in published order.
// p-Median instances get the default p (1 for n=3, 2 for n=4) unless
// overridden.
inline std::vector<ProblemInstance> builtin_instances(
    Family family, int size, std::optional<int> p_override = {}) {
  std::vector<ProblemInstance> out;
  if (family == Family::PMedian && (size == 3 || size == 4)) {
    const auto& rows =
        size == 3 ? builtin_data::pmedian3() : builtin_data::pmedian4();
    int p = p_override.value_or(size == 3 ? 1 : 2);
    for (const auto& r : rows) {
      PMedianInstance x;
      x.n = size;
      x.p = p;
      x.demand = r.d;
      x.cost = r.c;
      x.validate();
      out.emplace_back(std::move(x));
    }
    return out;
  }
  if (family == Family::Fcflp && size == 3) {
    for (const auto& r : builtin_data::fcflp3()) {
      FcflpInstance x;
      x.n = size;
      x.demand = r.d;
      x.capacity = r.q;
      x.fixed_cost.assign(r.f.begin(), r.f.end());
      x.cost.resize(3);
      for (int i = 0; i < 3; ++i)
        x.cost[i].assign(r.c[i].begin(), r.c[i].end());
      x.validate();
      out.emplace_back(std::move(x));
    }
    return out;
  }
  throw UnknownTable("no built-in table for (" + family_name(family) + ", n=" +
                     std::to_string(size) + ")");
}

// ---------------------------------------------------------------------------
// Seeded random instances. Deterministic across platforms: all draws go
// through draw() below rather than std::uniform_int_distribution.
// ---------------------------------------------------------------------------

struct RandomRanges {
  std::int64_t cost_min = 1, cost_max = 9;   // off-diagonal assignment costs
  std::int64_t diag_min = 0, diag_max = 1;   // self-service costs
  std::int64_t demand_min = 1, demand_max = 3;
  std::int64_t cap_min = 3, cap_max = 7;
  std::int64_t fixed_min = 1, fixed_max = 9;
  std::int64_t lambda_min = 0, lambda_max = 3;
  std::int64_t dist_max = 3;  // p-center distances in [0, dist_max]
  int p = 1;
  int periods = 2;
  int open_sites = 2;  // |S| for GAP
  std::int64_t open_limit = 1;  // m_t for DMPFLP

  bool valid() const {
    return cost_min >= 0 && cost_min <= cost_max && diag_min >= 0 &&
           diag_min <= diag_max && demand_min >= 1 &&
           demand_min <= demand_max && cap_min >= 1 && cap_min <= cap_max &&
           fixed_min >= 0 && fixed_min <= fixed_max && lambda_min >= 0 &&
           lambda_min <= lambda_max && dist_max >= 0 && p >= 1 &&
           periods >= 1 && open_sites >= 1 && open_limit >= 0;
  }
};

namespace detail {

inline std::int64_t draw(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
  return lo + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

inline bool gap_feasible(const GapInstance& g, std::size_t j,
                         std::vector<std::int64_t>& load) {
  if (j == static_cast<std::size_t>(g.n)) return true;
  for (std::size_t i = 0; i < g.open_sites.size(); ++i) {
    if (load[i] + g.demand[j] <= g.capacity[i]) {
      load[i] += g.demand[j];
      if (gap_feasible(g, j + 1, load)) return true;
      load[i] -= g.demand[j];
    }
  }
  return false;
}

}  // namespace detail

inline ProblemInstance random_instance(Family family, int n, std::uint64_t seed,
                                       const RandomRanges& r = {}) {
  if (n < 2) throw ValidationError("n: must be >= 2");
  if (!r.valid()) throw ValidationError("ranges: inconsistent bounds");
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  using detail::draw;

  auto cost_matrix = [&](int rows, int cols) {
    std::vector<std::vector<std::int64_t>> c(rows,
                                             std::vector<std::int64_t>(cols));
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j)
        c[i][j] = (i == j) ? draw(rng, r.diag_min, r.diag_max)
                           : draw(rng, r.cost_min, r.cost_max);
    return c;
  };
  auto int_vec = [&](int len, std::int64_t lo, std::int64_t hi) {
    std::vector<std::int64_t> v(len);
    for (auto& x : v) x = draw(rng, lo, hi);
    return v;
  };

  switch (family) {
    case Family::PMedian: {
      PMedianInstance x;
      x.n = n;
      x.p = std::min(r.p, n - 1);
      x.demand = int_vec(n, r.demand_min, r.demand_max);
      x.cost = cost_matrix(n, n);
      x.validate();
      return x;
    }
    case Family::PCenter: {
      PCenterInstance x;
      x.n = n;
      x.p = std::min(r.p, n - 1);
      x.distance.assign(n, std::vector<std::int64_t>(n));
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          x.distance[i][j] = (i == j) ? 0 : draw(rng, 0, r.dist_max);
      x.validate();
      return x;
    }
    case Family::Fcflp: {
      for (;;) {  // retry until total capacity covers total demand
        FcflpInstance x;
        x.n = n;
        x.demand = int_vec(n, r.demand_min, r.demand_max);
        x.capacity = int_vec(n, r.cap_min, r.cap_max);
        auto f = int_vec(n, r.fixed_min, r.fixed_max);
        x.fixed_cost.assign(f.begin(), f.end());
        auto c = cost_matrix(n, n);
        x.cost.resize(n);
        for (int i = 0; i < n; ++i) x.cost[i].assign(c[i].begin(), c[i].end());
        std::int64_t qs = 0, ds = 0;
        for (auto q : x.capacity) qs += q;
        for (auto d : x.demand) ds += d;
        if (qs < ds) continue;
        x.validate();
        return x;
      }
    }
    case Family::Gap: {
      for (;;) {  // retry until an assignment respecting capacities exists
        GapInstance x;
        x.n = n;
        int s = std::min(r.open_sites, n);
        for (int i = 0; i < s; ++i) x.open_sites.push_back(i);
        x.demand = int_vec(n, r.demand_min, r.demand_max);
        x.capacity = int_vec(s, r.cap_min, r.cap_max);
        x.cost.resize(s);
        for (int i = 0; i < s; ++i) {
          x.cost[i].resize(n);
          for (int j = 0; j < n; ++j)
            x.cost[i][j] = (x.open_sites[i] == j)
                               ? draw(rng, r.diag_min, r.diag_max)
                               : draw(rng, r.cost_min, r.cost_max);
        }
        std::vector<std::int64_t> load(s, 0);
        if (!detail::gap_feasible(x, 0, load)) continue;
        x.validate();
        return x;
      }
    }
    case Family::Domp: {
      DompInstance x;
      x.m = n;
      x.n_open = std::min(r.p, n - 1);
      x.cost = cost_matrix(n, n);
      auto l = int_vec(n, r.lambda_min, r.lambda_max);
      x.lambda.assign(l.begin(), l.end());
      x.validate();
      return x;
    }
    case Family::Dmpflp: {
      DmpflpInstance x;
      x.n = n;
      x.p = std::min(r.p, n - 1);
      x.periods = r.periods;
      x.cost.resize(r.periods);
      for (int t = 0; t < r.periods; ++t) {
        auto c = cost_matrix(n, n);
        x.cost[t].resize(n);
        for (int i = 0; i < n; ++i)
          x.cost[t][i].assign(c[i].begin(), c[i].end());
      }
      x.open_cost.assign(n, std::vector<double>(r.periods));
      x.close_cost.assign(n, std::vector<double>(r.periods));
      for (int i = 0; i < n; ++i)
        for (int t = 0; t < r.periods; ++t) {
          x.open_cost[i][t] = static_cast<double>(draw(rng, r.fixed_min, r.fixed_max));
          x.close_cost[i][t] = static_cast<double>(draw(rng, r.fixed_min, r.fixed_max));
        }
      x.open_limit.assign(r.periods, r.open_limit);
      x.validate();
      return x;
    }
  }
  throw UnknownFamily("random_instance: unhandled family");
}

}  // namespace locqubo
