#pragma once

// Variational circuit driver: standard QAOA (uniform start, X mixer) and the
// warm-started variant (product start, per-qubit biased mixer), with a
// derivative-free optimizer over the 2p angle parameters and multinomial
// sampling of the final state.

#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "locqubo/builders.hpp"
#include "locqubo/nelder_mead.hpp"
#include "locqubo/statevector.hpp"
#include "locqubo/warmstart.hpp"

namespace locqubo {

struct QaoaConfig {
  int layers = 1;
  int shots = 8000;
  std::uint64_t seed = 0;
  int max_iter = 50;    // objective-evaluation budget of the optimizer
  double tol = 1e-4;
  std::vector<double> init_betas;   // empty: pi/4 per layer
  std::vector<double> init_gammas;  // empty: pi/8 per layer

  void validate() const {
    if (layers < 1) throw ValidationError("layers: must be >= 1");
    if (shots < 1) throw ValidationError("shots: must be >= 1");
    if (!init_betas.empty() &&
        static_cast<int>(init_betas.size()) != layers)
      throw ValidationError("init_betas: one entry per layer");
    if (!init_gammas.empty() &&
        static_cast<int>(init_gammas.size()) != layers)
      throw ValidationError("init_gammas: one entry per layer");
  }
};

struct QaoaResult {
  std::vector<double> betas;
  std::vector<double> gammas;
  double expectation = 0.0;             // at the final parameters
  std::vector<double> trace;            // best-so-far optimizer objective
  std::map<std::uint64_t, int> counts;  // basis index -> shots
  Bitstring best_sample;
  double best_energy = 0.0;
  double rel_freq = 0.0;                // frequency of the best-energy sample
  std::optional<bool> best_feasible;    // decode verdict, when decodable
};

namespace detail {

inline Statevector run_circuit(const Statevector& initial,
                               const std::vector<double>& energies,
                               const std::vector<double>& params, int layers,
                               const std::vector<double>* mixer_thetas) {
  Statevector s = initial;
  for (int l = 0; l < layers; ++l) {
    apply_cost_phase_table(s, energies,
                           params[static_cast<std::size_t>(layers + l)]);
    s = mixer_thetas
            ? apply_ws_mixer(s, params[static_cast<std::size_t>(l)],
                             *mixer_thetas)
            : apply_x_mixer(s, params[static_cast<std::size_t>(l)]);
  }
  return s;
}

inline QaoaResult run_variational(const QuboModel& q, const QaoaConfig& cfg,
                                  const Statevector& initial,
                                  const std::vector<double>* mixer_thetas) {
  cfg.validate();
  const auto energies = energy_table(q);
  const int p = cfg.layers;
  std::vector<double> x0(static_cast<std::size_t>(2 * p));
  for (int l = 0; l < p; ++l) {
    x0[static_cast<std::size_t>(l)] =
        cfg.init_betas.empty() ? 0.78539816339744831
                               : cfg.init_betas[static_cast<std::size_t>(l)];
    x0[static_cast<std::size_t>(p + l)] =
        cfg.init_gammas.empty() ? 0.39269908169872415
                                : cfg.init_gammas[static_cast<std::size_t>(l)];
  }
  auto objective = [&](const std::vector<double>& params) {
    return expectation_table(
        run_circuit(initial, energies, params, p, mixer_thetas), energies);
  };
  auto opt = nelder_mead(objective, x0, cfg.max_iter, cfg.tol);

  QaoaResult res;
  res.betas.assign(opt.x.begin(), opt.x.begin() + p);
  res.gammas.assign(opt.x.begin() + p, opt.x.end());
  res.trace = std::move(opt.trace);
  auto final_state = run_circuit(initial, energies, opt.x, p, mixer_thetas);
  res.expectation = expectation_table(final_state, energies);
  res.counts = sample(final_state, cfg.shots, cfg.seed);

  std::uint64_t best_key = 0;
  double best_e = 0.0;
  bool first = true;
  for (const auto& [key, cnt] : res.counts) {
    const double e = energies[key];
    if (first || e < best_e) {
      first = false;
      best_e = e;
      best_key = key;
    }
  }
  res.best_sample = bits_of_index(best_key, q.n_vars);
  res.best_energy = best_e;
  res.rel_freq =
      static_cast<double>(res.counts[best_key]) / static_cast<double>(cfg.shots);
  if (q.family && q.source)
    res.best_feasible = decode(q, res.best_sample).feasible;
  return res;
}

}  // namespace detail

inline QaoaResult run_qaoa(const QuboModel& q, const QaoaConfig& cfg = {}) {
  return detail::run_variational(q, cfg, prepare_uniform(q.n_vars), nullptr);
}

inline QaoaResult run_ws_qaoa(const QuboModel& q, const WarmStartPoint& ws,
                              const QaoaConfig& cfg = {}) {
  if (static_cast<int>(ws.thetas.size()) != q.n_vars)
    throw SizeMismatch("run_ws_qaoa: warm start does not match the model");
  return detail::run_variational(q, cfg, prepare_warmstart(ws.thetas),
                                 &ws.thetas);
}

inline nlohmann::json qaoa_result_to_json(const QaoaResult& r) {
  nlohmann::json j;
  j["betas"] = r.betas;
  j["gammas"] = r.gammas;
  j["expectation"] = r.expectation;
  j["trace"] = r.trace;
  nlohmann::json counts = nlohmann::json::object();
  for (const auto& [key, cnt] : r.counts) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "0x%llx",
                  static_cast<unsigned long long>(key));
    counts[buf] = cnt;
  }
  j["counts"] = counts;
  j["best_sample"] = r.best_sample;
  j["best_energy"] = r.best_energy;
  j["rel_freq"] = r.rel_freq;
  if (r.best_feasible)
    j["best_feasible"] = *r.best_feasible;
  return j;
}

}  // namespace locqubo
