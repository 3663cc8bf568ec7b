#pragma once

// Experiment runner: executes a grid of (built-in instance) x (method) cells,
// scores each decoded best sample against the exact brute-force optimum, and
// emits feasibility tables and CSV/JSON/plot-data reports.

#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "locqubo/builders.hpp"
#include "locqubo/heuristics.hpp"
#include "locqubo/qaoa.hpp"
#include "locqubo/relaxations.hpp"
#include "locqubo/warmstart.hpp"

namespace locqubo {

struct MethodSpec {
  enum class Kind { Sa, Tabu, Qaoa, WsQaoa };
  Kind kind = Kind::Sa;
  int budget = 0;        // reads / restarts / layers
  std::string strategy;  // R, S, L or C (warm-started runs only)
  std::string name;
};

// Accepted names: SA-<reads>, Tabu-<restarts>, QAOA-<layers>,
// WS-QAOA-<layers>-<R|S|L|C>.
inline MethodSpec parse_method(const std::string& name) {
  MethodSpec m;
  m.name = name;
  auto number = [&](const std::string& text) {
    try {
      std::size_t used = 0;
      int v = std::stoi(text, &used);
      if (used != text.size() || v < 0)
        throw ValidationError("method: bad budget in '" + name + "'");
      return v;
    } catch (const std::exception&) {
      throw ValidationError("method: bad budget in '" + name + "'");
    }
  };
  if (name.rfind("WS-QAOA-", 0) == 0) {
    const std::string rest = name.substr(8);
    const auto dash = rest.find('-');
    if (dash == std::string::npos)
      throw ValidationError("method: expected WS-QAOA-<layers>-<strategy>");
    m.kind = MethodSpec::Kind::WsQaoa;
    m.budget = number(rest.substr(0, dash));
    m.strategy = rest.substr(dash + 1);
    if (m.budget < 1) throw ValidationError("method: layers must be >= 1");
    if (m.strategy != "R" && m.strategy != "S" && m.strategy != "L" &&
        m.strategy != "C")
      throw ValidationError("method: strategy must be R, S, L or C");
    return m;
  }
  if (name.rfind("QAOA-", 0) == 0) {
    m.kind = MethodSpec::Kind::Qaoa;
    m.budget = number(name.substr(5));
    if (m.budget < 1) throw ValidationError("method: layers must be >= 1");
    return m;
  }
  if (name.rfind("SA-", 0) == 0) {
    m.kind = MethodSpec::Kind::Sa;
    m.budget = number(name.substr(3));
    if (m.budget < 1) throw ValidationError("method: reads must be >= 1");
    return m;
  }
  if (name.rfind("Tabu-", 0) == 0) {
    m.kind = MethodSpec::Kind::Tabu;
    m.budget = number(name.substr(5));
    return m;
  }
  throw ValidationError("method: unknown method name '" + name + "'");
}

struct ExperimentPlan {
  Family family = Family::PMedian;
  int size = 3;
  std::vector<int> indices;  // 0-based into the built-in table; empty: all
  std::optional<int> p_override;
  std::string formulation;  // FCFLP: "aggregated" (default) / "disaggregated"
  std::vector<std::string> methods;
  std::uint64_t seed_base = 0;
  double eps = 0.1;
  int shots = 8000;
  int max_iter = 50;
  double tol = 1e-4;
  std::string y_matrix_dir;  // per-instance Y files for the S strategy
};

inline ExperimentPlan plan_from_json(const nlohmann::json& j) {
  ExperimentPlan plan;
  try {
    plan.family = family_from_name(j.at("family").get<std::string>());
    plan.size = j.at("size").get<int>();
    plan.methods = j.at("methods").get<std::vector<std::string>>();
    if (j.contains("indices"))
      plan.indices = j["indices"].get<std::vector<int>>();
    if (j.contains("p")) plan.p_override = j["p"].get<int>();
    if (j.contains("formulation"))
      plan.formulation = j["formulation"].get<std::string>();
    if (j.contains("seed_base"))
      plan.seed_base = j["seed_base"].get<std::uint64_t>();
    if (j.contains("eps")) plan.eps = j["eps"].get<double>();
    if (j.contains("shots")) plan.shots = j["shots"].get<int>();
    if (j.contains("max_iter")) plan.max_iter = j["max_iter"].get<int>();
    if (j.contains("tol")) plan.tol = j["tol"].get<double>();
    if (j.contains("y_matrix_dir"))
      plan.y_matrix_dir = j["y_matrix_dir"].get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("plan: ") + e.what());
  }
  for (const auto& name : plan.methods) parse_method(name);  // fail early
  return plan;
}

inline nlohmann::json plan_to_json(const ExperimentPlan& plan) {
  nlohmann::json j;
  j["family"] = family_name(plan.family);
  j["size"] = plan.size;
  j["methods"] = plan.methods;
  if (!plan.indices.empty()) j["indices"] = plan.indices;
  if (plan.p_override) j["p"] = *plan.p_override;
  if (!plan.formulation.empty()) j["formulation"] = plan.formulation;
  j["seed_base"] = plan.seed_base;
  j["eps"] = plan.eps;
  j["shots"] = plan.shots;
  j["max_iter"] = plan.max_iter;
  j["tol"] = plan.tol;
  if (!plan.y_matrix_dir.empty()) j["y_matrix_dir"] = plan.y_matrix_dir;
  return j;
}

struct RunReport {
  std::string instance;
  std::string method;
  std::string status = "ok";  // "ok", "skipped" or "failed: <reason>"
  bool feasible = false;
  std::optional<double> z_method;  // decoded objective when feasible
  double z_exact = 0.0;
  std::optional<double> ratio;  // z_method / z_exact, feasible cells only
  double rel_freq = 0.0;
  double runtime_ms = 0.0;
};

namespace detail {

inline std::string instance_label(const ExperimentPlan& plan, int index) {
  return family_name(plan.family) + "-" + std::to_string(plan.size) + "-" +
         std::to_string(index + 1);
}

struct CellOutcome {
  Bitstring best;
  double rel_freq = 0.0;
};

inline CellOutcome execute_method(const QuboModel& q,
                                  const ProblemInstance& inst,
                                  const MethodSpec& m,
                                  const ExperimentPlan& plan,
                                  std::uint64_t seed,
                                  const std::string& label) {
  CellOutcome out;
  switch (m.kind) {
    case MethodSpec::Kind::Sa: {
      SaConfig cfg;
      cfg.num_reads = m.budget;
      cfg.seed = seed;
      auto r = simulated_annealing(q, cfg);
      out.best = r.front().first;
      int hits = 0;
      for (const auto& [bits, e] : r)
        if (e == r.front().second) ++hits;
      out.rel_freq = static_cast<double>(hits) / static_cast<double>(r.size());
      return out;
    }
    case MethodSpec::Kind::Tabu: {
      TabuConfig cfg;
      cfg.num_restarts = m.budget;
      cfg.seed = seed;
      auto r = tabu_search(q, cfg);
      out.best = r.front().first;
      int hits = 0;
      for (const auto& [bits, e] : r)
        if (e == r.front().second) ++hits;
      out.rel_freq = static_cast<double>(hits) / static_cast<double>(r.size());
      return out;
    }
    case MethodSpec::Kind::Qaoa:
    case MethodSpec::Kind::WsQaoa: {
      QaoaConfig cfg;
      cfg.layers = m.budget;
      cfg.shots = plan.shots;
      cfg.max_iter = plan.max_iter;
      cfg.tol = plan.tol;
      cfg.seed = seed;
      QaoaResult r;
      if (m.kind == MethodSpec::Kind::Qaoa) {
        r = run_qaoa(q, cfg);
      } else {
        WarmStartPoint ws;
        if (m.strategy == "R") {
          ws = strategy_R(q, plan.eps);
        } else if (m.strategy == "L") {
          ws = strategy_L(inst, plan.formulation, plan.eps);
        } else if (m.strategy == "C") {
          ws = strategy_C(inst, plan.formulation, q, plan.eps);
        } else {  // S: externally solved lifted matrix, one file per instance
          const std::string path = plan.y_matrix_dir + "/" + label + ".json";
          std::ifstream in(path);
          if (!in) throw UnknownTable("missing Y matrix file: " + path);
          nlohmann::json j;
          in >> j;
          ws = strategy_S(matrix_from_json(j), plan.eps);
        }
        r = run_ws_qaoa(q, ws, cfg);
      }
      out.best = r.best_sample;
      out.rel_freq = r.rel_freq;
      return out;
    }
  }
  throw ValidationError("method: unhandled kind");
}

}  // namespace detail

inline std::vector<RunReport> run_experiment(const ExperimentPlan& plan) {
  std::vector<MethodSpec> methods;
  for (const auto& name : plan.methods) methods.push_back(parse_method(name));
  auto instances =
      builtin_instances(plan.family, plan.size, plan.p_override);
  std::vector<int> indices = plan.indices;
  if (indices.empty())
    for (int i = 0; i < static_cast<int>(instances.size()); ++i)
      indices.push_back(i);

  std::vector<RunReport> reports;
  for (int idx : indices) {
    if (idx < 0 || idx >= static_cast<int>(instances.size()))
      throw ValidationError("indices: out of range");
    const auto& inst = instances[static_cast<std::size_t>(idx)];
    const std::string label = detail::instance_label(plan, idx);
    for (std::size_t mi = 0; mi < methods.size(); ++mi) {
      RunReport rep;
      rep.instance = label;
      rep.method = methods[mi].name;
      const auto start = std::chrono::steady_clock::now();
      try {
        auto q = build_qubo(inst, plan.formulation);
        rep.z_exact = brute_force_min(q).min_energy;
        const std::uint64_t seed =
            plan.seed_base + static_cast<std::uint64_t>(idx) * 1000 + mi;
        auto cell =
            detail::execute_method(q, inst, methods[mi], plan, seed, label);
        rep.rel_freq = cell.rel_freq;
        auto sol = decode(q, cell.best);
        rep.feasible = sol.feasible;
        if (sol.feasible) {
          rep.z_method = sol.original_objective;
          rep.ratio = rep.z_exact != 0.0
                          ? *rep.z_method / rep.z_exact
                          : (*rep.z_method == 0.0 ? 1.0 : std::nan(""));
        }
      } catch (const UnknownTable& e) {
        rep.status = "skipped";
      } catch (const std::exception& e) {
        rep.status = std::string("failed: ") + e.what();
      }
      rep.runtime_ms =
          std::chrono::duration<double, std::milli>(
              std::chrono::steady_clock::now() - start)
              .count();
      reports.push_back(std::move(rep));
    }
  }
  return reports;
}

// Number of feasible cells per method (the layout of the feasibility tables).
inline std::map<std::string, int> feasibility_table(
    const std::vector<RunReport>& reports) {
  std::map<std::string, int> counts;
  for (const auto& r : reports)
    if (r.status == "ok" && r.feasible) ++counts[r.method];
  for (const auto& r : reports) counts.try_emplace(r.method, 0);
  return counts;
}

inline nlohmann::json report_to_json(const std::vector<RunReport>& reports) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : reports) {
    nlohmann::json row;
    row["instance"] = r.instance;
    row["method"] = r.method;
    row["status"] = r.status;
    row["feasible"] = r.feasible;
    if (r.z_method) row["z_method"] = *r.z_method;
    row["z_exact"] = r.z_exact;
    if (r.ratio) row["ratio"] = *r.ratio;
    row["rel_freq"] = r.rel_freq;
    row["runtime_ms"] = r.runtime_ms;
    arr.push_back(std::move(row));
  }
  return arr;
}

inline std::vector<RunReport> report_from_json(const nlohmann::json& arr) {
  if (!arr.is_array()) throw ParseError("report: expected an array");
  std::vector<RunReport> reports;
  for (const auto& row : arr) {
    RunReport r;
    try {
      r.instance = row.at("instance").get<std::string>();
      r.method = row.at("method").get<std::string>();
      r.status = row.at("status").get<std::string>();
      r.feasible = row.at("feasible").get<bool>();
      if (row.contains("z_method")) r.z_method = row["z_method"].get<double>();
      r.z_exact = row.at("z_exact").get<double>();
      if (row.contains("ratio")) r.ratio = row["ratio"].get<double>();
      r.rel_freq = row.at("rel_freq").get<double>();
      r.runtime_ms = row.at("runtime_ms").get<double>();
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("report: ") + e.what());
    }
    reports.push_back(std::move(r));
  }
  return reports;
}

inline std::string emit_report(const std::vector<RunReport>& reports,
                               const std::string& format) {
  if (format == "json") return report_to_json(reports).dump(2) + "\n";
  if (format == "csv") {
    std::ostringstream out;
    out << "instance,method,feasible,z_method,z_exact,ratio,rel_freq,"
           "runtime_ms\n";
    for (const auto& r : reports) {
      out << r.instance << ',' << r.method << ','
          << (r.feasible ? "true" : "false") << ',';
      if (r.z_method) out << format_double(*r.z_method);
      out << ',' << format_double(r.z_exact) << ',';
      if (r.ratio) out << format_double(*r.ratio);
      out << ',' << format_double(r.rel_freq) << ','
          << format_double(r.runtime_ms) << '\n';
    }
    return out.str();
  }
  if (format == "plotdata") {
    // per-method (instance index, ratio) series; infeasible cells are
    // omitted so they appear as gaps
    std::map<std::string, std::vector<std::pair<int, double>>> series;
    std::map<std::string, int> index_of;
    for (const auto& r : reports) {
      auto [it, fresh] =
          index_of.try_emplace(r.instance, static_cast<int>(index_of.size()) + 1);
      if (r.status == "ok" && r.feasible && r.ratio)
        series[r.method].push_back({it->second, *r.ratio});
      else
        series.try_emplace(r.method);
    }
    std::ostringstream out;
    for (const auto& [method, points] : series) {
      out << "# " << method << '\n';
      for (const auto& [i, ratio] : points)
        out << i << ' ' << format_double(ratio) << '\n';
      out << '\n';
    }
    return out.str();
  }
  throw ValidationError("format: must be csv, json or plotdata");
}

}  // namespace locqubo
