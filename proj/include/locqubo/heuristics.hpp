#pragma once

// Classical single-bit-flip metaheuristics over QUBO landscapes: simulated
// annealing with a geometric temperature schedule and tabu search with a
// recency tabu list plus aspiration. Both keep incremental flip costs so a
// move costs O(degree) and both derive an independent RNG stream per
// read/restart from (seed, index), making results merge-order independent.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "locqubo/qubo.hpp"

namespace locqubo {

struct SaConfig {
  int num_reads = 20;
  int sweeps = 1000;
  double t_hot = 0.0;  // 0: per-read automatic (max |flip cost| at the start)
  double t_cold = 0.01;
  std::uint64_t seed = 0;

  void validate() const {
    if (num_reads < 1) throw ValidationError("num_reads: must be >= 1");
    if (sweeps < 1) throw ValidationError("sweeps: must be >= 1");
    if (t_cold <= 0.0) throw ValidationError("t_cold: must be positive");
    if (t_hot != 0.0 && t_hot <= t_cold)
      throw ValidationError("t_hot: must exceed t_cold");
  }
};

struct TabuConfig {
  int num_restarts = 0;
  int tenure = 0;           // 0: automatic max(7, n/4)
  int max_stagnation = 0;   // moves without improvement; 0: automatic 5n^2
  std::uint64_t seed = 0;

  void validate() const {
    if (num_restarts < 0) throw ValidationError("num_restarts: must be >= 0");
    if (tenure < 0) throw ValidationError("tenure: must be >= 0");
    if (max_stagnation < 0)
      throw ValidationError("max_stagnation: must be >= 0");
  }
};

using HeuristicResults = std::vector<std::pair<Bitstring, double>>;

namespace detail {

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

struct FlipLandscape {
  int n;
  std::vector<double> diag;
  std::vector<std::vector<std::pair<int, double>>> adj;

  explicit FlipLandscape(const QuboModel& q)
      : n(q.n_vars),
        diag(static_cast<std::size_t>(q.n_vars), 0.0),
        adj(static_cast<std::size_t>(q.n_vars)) {
    for (const auto& [key, v] : q.coeffs) {
      if (key.first == key.second) {
        diag[static_cast<std::size_t>(key.first)] += v;
      } else {
        adj[static_cast<std::size_t>(key.first)].push_back({key.second, v});
        adj[static_cast<std::size_t>(key.second)].push_back({key.first, v});
      }
    }
  }

  // delta[i] = energy change of flipping bit i at the current point
  std::vector<double> deltas(const Bitstring& x) const {
    std::vector<double> d(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      double field = diag[static_cast<std::size_t>(i)];
      for (const auto& [j, v] : adj[static_cast<std::size_t>(i)])
        field += v * x[static_cast<std::size_t>(j)];
      d[static_cast<std::size_t>(i)] =
          x[static_cast<std::size_t>(i)] ? -field : field;
    }
    return d;
  }

  void flip(Bitstring& x, std::vector<double>& d, int i) const {
    const double si = 1.0 - 2.0 * x[static_cast<std::size_t>(i)];
    for (const auto& [j, v] : adj[static_cast<std::size_t>(i)]) {
      const double sj = 1.0 - 2.0 * x[static_cast<std::size_t>(j)];
      d[static_cast<std::size_t>(j)] += v * si * sj;
    }
    d[static_cast<std::size_t>(i)] = -d[static_cast<std::size_t>(i)];
    x[static_cast<std::size_t>(i)] ^= 1;
  }
};

inline Bitstring random_point(int n, std::mt19937_64& rng) {
  Bitstring x(static_cast<std::size_t>(n));
  for (auto& b : x) b = static_cast<int>(rng() & 1ULL);
  return x;
}

inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace detail

inline HeuristicResults simulated_annealing(const QuboModel& q,
                                            const SaConfig& cfg = {}) {
  cfg.validate();
  if (q.n_vars < 1) throw ValidationError("n_vars: must be positive");
  const detail::FlipLandscape land(q);
  HeuristicResults out;
  for (int read = 0; read < cfg.num_reads; ++read) {
    std::mt19937_64 rng(
        detail::mix_seed(cfg.seed, static_cast<std::uint64_t>(read)));
    Bitstring x = detail::random_point(q.n_vars, rng);
    auto d = land.deltas(x);
    double t_hot = cfg.t_hot;
    if (t_hot == 0.0) {
      for (double v : d) t_hot = std::max(t_hot, std::abs(v));
      if (t_hot <= cfg.t_cold) t_hot = cfg.t_cold * 10.0;
    }
    const double ratio =
        cfg.sweeps > 1
            ? std::pow(cfg.t_cold / t_hot, 1.0 / static_cast<double>(cfg.sweeps - 1))
            : 1.0;
    double energy = q.energy(x);
    Bitstring best = x;
    double best_energy = energy;
    double temp = t_hot;
    for (int sweep = 0; sweep < cfg.sweeps; ++sweep) {
      for (int i = 0; i < q.n_vars; ++i) {
        const double delta = d[static_cast<std::size_t>(i)];
        if (delta <= 0.0 ||
            detail::uniform01(rng) < std::exp(-delta / temp)) {
          land.flip(x, d, i);
          energy += delta;
          if (energy < best_energy) {
            best_energy = energy;
            best = x;
          }
        }
      }
      temp *= ratio;
    }
    out.push_back({std::move(best), best_energy});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.second < b.second; });
  return out;
}

inline HeuristicResults tabu_search(const QuboModel& q,
                                    const TabuConfig& cfg = {}) {
  cfg.validate();
  if (q.n_vars < 1) throw ValidationError("n_vars: must be positive");
  const int n = q.n_vars;
  const detail::FlipLandscape land(q);
  const int tenure = cfg.tenure > 0 ? cfg.tenure : std::max(7, n / 4);
  const long long stagnation_cap =
      cfg.max_stagnation > 0 ? cfg.max_stagnation
                             : 5LL * static_cast<long long>(n) * n;
  HeuristicResults out;
  for (int run = 0; run <= cfg.num_restarts; ++run) {
    std::mt19937_64 rng(
        detail::mix_seed(cfg.seed ^ 0x517cc1b727220a95ULL,
                         static_cast<std::uint64_t>(run)));
    Bitstring x = detail::random_point(n, rng);
    auto d = land.deltas(x);
    double energy = q.energy(x);
    Bitstring best = x;
    double best_energy = energy;
    std::vector<long long> tabu_until(static_cast<std::size_t>(n), -1);
    long long move = 0;
    long long since_improvement = 0;
    while (since_improvement < stagnation_cap) {
      int pick = -1;
      double pick_delta = 0.0;
      for (int i = 0; i < n; ++i) {
        const double delta = d[static_cast<std::size_t>(i)];
        const bool is_tabu = tabu_until[static_cast<std::size_t>(i)] >= move;
        const bool aspires = energy + delta < best_energy;
        if (is_tabu && !aspires) continue;
        if (pick < 0 || delta < pick_delta) {
          pick = i;
          pick_delta = delta;
        }
      }
      if (pick < 0) break;  // every move tabu and none aspires
      land.flip(x, d, pick);
      energy += pick_delta;
      tabu_until[static_cast<std::size_t>(pick)] = move + tenure;
      ++move;
      if (energy < best_energy) {
        best_energy = energy;
        best = x;
        since_improvement = 0;
      } else {
        ++since_improvement;
      }
    }
    out.push_back({std::move(best), best_energy});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.second < b.second; });
  return out;
}

inline nlohmann::json heuristic_results_to_json(const HeuristicResults& r) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& [bits, energy] : r) {
    nlohmann::json row = {{"energy", energy}, {"bits", bits}};
    if (bits.size() <= 64) {  // hex key only when it fits a machine word
      std::uint64_t key = 0;
      for (std::size_t i = 0; i < bits.size(); ++i)
        if (bits[i]) key |= 1ULL << i;
      char buf[20];
      std::snprintf(buf, sizeof(buf), "0x%llx",
                    static_cast<unsigned long long>(key));
      row["sample"] = buf;
    }
    arr.push_back(std::move(row));
  }
  return arr;
}

}  // namespace locqubo
