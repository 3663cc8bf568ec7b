#pragma once

// QUBO data structure, energy evaluation, Ising conversion, the penalty
// bound, the exact Gray-code enumeration oracle, and file formats.

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "locqubo/errors.hpp"
#include "locqubo/instances.hpp"

namespace locqubo {

// Shortest round-trip decimal rendering of a double ("648" not "648.000000").
inline std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

// ---------------------------------------------------------------------------
// Variable descriptors: bijection between named model variables and qubits.
// ---------------------------------------------------------------------------

struct VarDesc {
  std::string kind;        // "x", "y", "s", "z", "u", "w", "v", ...
  std::vector<int> index;  // multi-index, builder-defined meaning

  bool operator==(const VarDesc& o) const = default;

  std::string label() const {
    std::string s = kind;
    if (!index.empty()) {
      s += "(";
      for (std::size_t k = 0; k < index.size(); ++k) {
        if (k) s += ",";
        s += std::to_string(index[k]);
      }
      s += ")";
    }
    return s;
  }
};

struct VariableMap {
  std::vector<VarDesc> vars;  // position = qubit index

  int size() const { return static_cast<int>(vars.size()); }
  int add(std::string kind, std::vector<int> index = {}) {
    vars.push_back({std::move(kind), std::move(index)});
    return size() - 1;
  }
  const VarDesc& at(int q) const { return vars.at(static_cast<std::size_t>(q)); }
  std::optional<int> find(const VarDesc& d) const {
    for (int q = 0; q < size(); ++q)
      if (vars[static_cast<std::size_t>(q)] == d) return q;
    return std::nullopt;
  }
  bool operator==(const VariableMap& o) const = default;
};

// ---------------------------------------------------------------------------
// QuboModel
// ---------------------------------------------------------------------------

using Bitstring = std::vector<int>;  // entries 0/1, index = qubit

struct QuboModel {
  int n_vars = 0;
  // Upper-triangular sparse store: key (i,j) with i <= j, no zero entries.
  // Diagonal entries are the linear terms (x^2 = x).
  std::map<std::pair<int, int>, double> coeffs;
  double offset = 0.0;
  double penalty = 0.0;
  VariableMap var_map;
  std::optional<Family> family;
  std::shared_ptr<const ProblemInstance> source;  // for decoding samples
  std::string formulation;  // "aggregated"/"disaggregated" for FCFLP

  // Accumulate a coefficient; symmetric input (i > j) is folded onto the
  // upper triangle, zeros are erased.
  void add(int i, int j, double v) {
    if (i > j) std::swap(i, j);
    if (i < 0 || j >= n_vars)
      throw SizeMismatch("coefficient index out of range");
    if (v == 0.0) return;
    auto key = std::make_pair(i, j);
    auto it = coeffs.find(key);
    if (it == coeffs.end()) {
      coeffs.emplace(key, v);
    } else {
      it->second += v;
      if (it->second == 0.0) coeffs.erase(it);
    }
  }

  double get(int i, int j) const {
    if (i > j) std::swap(i, j);
    auto it = coeffs.find({i, j});
    return it == coeffs.end() ? 0.0 : it->second;
  }

  double energy(const Bitstring& x) const {
    if (static_cast<int>(x.size()) != n_vars)
      throw LengthMismatch("energy: bitstring length " +
                           std::to_string(x.size()) + " != n_vars " +
                           std::to_string(n_vars));
    double e = offset;
    for (const auto& [ij, v] : coeffs)
      if (x[static_cast<std::size_t>(ij.first)] &&
          x[static_cast<std::size_t>(ij.second)])
        e += v;
    return e;
  }

  double energy_bits(std::uint64_t k) const {
    double e = offset;
    for (const auto& [ij, v] : coeffs)
      if (((k >> ij.first) & 1ULL) && ((k >> ij.second) & 1ULL)) e += v;
    return e;
  }
};

// P > sum of |c_i| satisfied with margin 1.
inline double penalty_bound(const std::vector<double>& costs) {
  double s = 0.0;
  for (double c : costs) s += std::abs(c);
  return s + 1.0;
}

// ---------------------------------------------------------------------------
// Ising conversion via z = 2x - 1.
// Convention: E(z) = -sum_{i<j} J_ij z_i z_j - sum_i h_i z_i + constant.
// ---------------------------------------------------------------------------

struct IsingModel {
  int n_vars = 0;
  std::map<std::pair<int, int>, double> couplings;  // J_ij, i < j
  std::vector<double> fields;                       // h_i
  double constant = 0.0;

  double energy(const std::vector<int>& z) const {
    if (static_cast<int>(z.size()) != n_vars)
      throw LengthMismatch("ising energy: spin vector length mismatch");
    double e = constant;
    for (const auto& [ij, J] : couplings)
      e -= J * z[static_cast<std::size_t>(ij.first)] *
           z[static_cast<std::size_t>(ij.second)];
    for (int i = 0; i < n_vars; ++i)
      e -= fields[static_cast<std::size_t>(i)] * z[static_cast<std::size_t>(i)];
    return e;
  }
};

inline IsingModel to_ising(const QuboModel& q) {
  // x_i = (1+z_i)/2:
  //   Q_ii x_i           -> Q_ii/2 + (Q_ii/2) z_i
  //   Q_ij x_i x_j (i<j) -> Q_ij/4 (1 + z_i + z_j + z_i z_j)
  // matched to E = -sum J z z - sum h z + const.
  IsingModel m;
  m.n_vars = q.n_vars;
  m.fields.assign(static_cast<std::size_t>(q.n_vars), 0.0);
  m.constant = q.offset;
  for (const auto& [ij, v] : q.coeffs) {
    auto [i, j] = ij;
    if (i == j) {
      m.fields[static_cast<std::size_t>(i)] -= v / 2.0;
      m.constant += v / 2.0;
    } else {
      auto it = m.couplings.find(ij);
      double J = -v / 4.0;
      if (it == m.couplings.end())
        m.couplings.emplace(ij, J);
      else
        it->second += J;
      m.fields[static_cast<std::size_t>(i)] -= v / 4.0;
      m.fields[static_cast<std::size_t>(j)] -= v / 4.0;
      m.constant += v / 4.0;
    }
  }
  for (auto it = m.couplings.begin(); it != m.couplings.end();)
    it = it->second == 0.0 ? m.couplings.erase(it) : std::next(it);
  return m;
}

// ---------------------------------------------------------------------------
// Exact enumeration. Gray-code order with incremental single-flip deltas;
// ties broken by lexicographically smallest bitstring (x_0 first), which
// makes the result independent of enumeration order.
// ---------------------------------------------------------------------------

struct BruteForceResult {
  Bitstring argmin;
  double min_energy = 0.0;
  bool is_unique = true;
};

inline BruteForceResult brute_force_min(const QuboModel& q) {
  if (q.n_vars > 30)
    throw CapExceeded("brute_force_min: " + std::to_string(q.n_vars) +
                      " variables exceeds the 30-variable cap");
  const int n = q.n_vars;
  // Adjacency for O(degree) local fields.
  std::vector<double> diag(static_cast<std::size_t>(n), 0.0);
  std::vector<std::vector<std::pair<int, double>>> adj(
      static_cast<std::size_t>(n));
  for (const auto& [ij, v] : q.coeffs) {
    auto [i, j] = ij;
    if (i == j) {
      diag[static_cast<std::size_t>(i)] = v;
    } else {
      adj[static_cast<std::size_t>(i)].push_back({j, v});
      adj[static_cast<std::size_t>(j)].push_back({i, v});
    }
  }

  std::uint64_t state = 0;  // bit i = x_i
  double e = q.offset;
  std::uint64_t best_state = 0;
  double best = e;
  bool unique = true;

  auto lex_less = [n](std::uint64_t a, std::uint64_t b) {
    for (int i = 0; i < n; ++i) {
      int ai = static_cast<int>((a >> i) & 1ULL);
      int bi = static_cast<int>((b >> i) & 1ULL);
      if (ai != bi) return ai < bi;
    }
    return false;
  };

  const std::uint64_t total = 1ULL << n;
  for (std::uint64_t k = 1; k < total; ++k) {
    int bit = std::countr_zero(k);  // Gray-code flip position
    double field = diag[static_cast<std::size_t>(bit)];
    for (const auto& [j, v] : adj[static_cast<std::size_t>(bit)])
      if ((state >> j) & 1ULL) field += v;
    std::uint64_t mask = 1ULL << bit;
    e += (state & mask) ? -field : field;
    state ^= mask;
    if (e < best) {
      best = e;
      best_state = state;
      unique = true;
    } else if (e == best && state != best_state) {
      unique = false;
      if (lex_less(state, best_state)) best_state = state;
    }
  }

  BruteForceResult r;
  r.min_energy = best;
  r.is_unique = unique;
  r.argmin.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    r.argmin[static_cast<std::size_t>(i)] =
        static_cast<int>((best_state >> i) & 1ULL);
  return r;
}

// ---------------------------------------------------------------------------
// File formats: sparse-coo-text and JSON.
// ---------------------------------------------------------------------------

inline std::string export_qubo_coo(const QuboModel& q) {
  std::string out = std::to_string(q.n_vars) + " " + format_double(q.offset) + "\n";
  for (const auto& [ij, v] : q.coeffs)
    out += std::to_string(ij.first) + " " + std::to_string(ij.second) + " " +
           format_double(v) + "\n";
  return out;
}

inline QuboModel import_qubo_coo(const std::string& text) {
  std::istringstream in(text);
  QuboModel q;
  std::string line;
  if (!std::getline(in, line)) throw ParseError("coo: missing header line");
  {
    std::istringstream h(line);
    if (!(h >> q.n_vars >> q.offset))
      throw ParseError("coo: header must be 'n_vars offset'");
  }
  if (q.n_vars < 0) throw ParseError("coo: negative n_vars");
  std::pair<int, int> prev{-1, -1};
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    int i, j;
    double v;
    if (!(ls >> i >> j >> v)) throw ParseError("coo: bad line: " + line);
    if (i < 0 || i > j || j >= q.n_vars)
      throw ParseError("coo: index out of range: " + line);
    std::pair<int, int> key{i, j};
    if (!(prev < key)) throw ParseError("coo: entries not sorted: " + line);
    prev = key;
    if (v != 0.0) q.coeffs.emplace(key, v);
  }
  return q;
}

inline nlohmann::json qubo_to_json(const QuboModel& q) {
  nlohmann::json j;
  j["n_vars"] = q.n_vars;
  j["offset"] = q.offset;
  j["penalty"] = q.penalty;
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [ij, v] : q.coeffs)
    terms.push_back({ij.first, ij.second, v});
  j["coeffs"] = std::move(terms);
  nlohmann::json vm = nlohmann::json::array();
  for (const auto& d : q.var_map.vars)
    vm.push_back({{"kind", d.kind}, {"index", d.index}});
  j["var_map"] = std::move(vm);
  if (q.family) j["family"] = family_name(*q.family);
  if (!q.formulation.empty()) j["formulation"] = q.formulation;
  if (q.source) j["instance"] = to_json(*q.source);
  return j;
}

inline QuboModel qubo_from_json(const nlohmann::json& j) {
  QuboModel q;
  try {
    q.n_vars = j.at("n_vars").get<int>();
    q.offset = j.at("offset").get<double>();
    q.penalty = j.value("penalty", 0.0);
    for (const auto& t : j.at("coeffs")) {
      int i = t.at(0).get<int>();
      int k = t.at(1).get<int>();
      double v = t.at(2).get<double>();
      if (i < 0 || i > k || k >= q.n_vars)
        throw ParseError("qubo json: coefficient index out of range");
      if (v != 0.0) q.coeffs[{i, k}] = v;
    }
    if (j.contains("var_map"))
      for (const auto& d : j.at("var_map"))
        q.var_map.add(d.at("kind").get<std::string>(),
                      d.at("index").get<std::vector<int>>());
    if (j.contains("family"))
      q.family = family_from_name(j.at("family").get<std::string>());
    if (j.contains("formulation"))
      q.formulation = j.at("formulation").get<std::string>();
    if (j.contains("instance"))
      q.source = std::make_shared<const ProblemInstance>(
          instance_from_json(j.at("instance")));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("qubo json: ") + e.what());
  }
  return q;
}

}  // namespace locqubo
