// Command-line front end: builds QUBO models from location-problem
// instances, runs the exact/heuristic/variational solvers, produces
// warm starts and relaxation data, and drives batch experiments.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "locqubo/builders.hpp"
#include "locqubo/harness.hpp"
#include "locqubo/heuristics.hpp"
#include "locqubo/qaoa.hpp"
#include "locqubo/relaxations.hpp"
#include "locqubo/warmstart.hpp"

namespace {

using namespace locqubo;

struct InstanceSource {
  std::string input;  // instance JSON file; overrides the built-in selector
  std::string family = "pmedian";
  int size = 3;
  int index = 1;  // 1-based position in the built-in table
  int p_value = 0;
  CLI::Option* p_option = nullptr;

  void add_options(CLI::App* cmd) {
    cmd->add_option("--input", input, "instance JSON file");
    cmd->add_option("--family", family,
                    "built-in family (pmedian, pcenter, fcflp, gap, domp, "
                    "dmpflp)");
    cmd->add_option("--size", size, "built-in table size (n)");
    cmd->add_option("--index", index, "built-in instance number (1-10)");
    p_option = cmd->add_option("-p,--p", p_value, "facility count override");
  }

  ProblemInstance load() const {
    if (!input.empty()) return load_instance(input);
    std::optional<int> p;
    if (p_option && p_option->count() > 0) p = p_value;
    auto all = builtin_instances(family_from_name(family), size, p);
    if (index < 1 || index > static_cast<int>(all.size()))
      throw ValidationError("index: must be between 1 and " +
                            std::to_string(all.size()));
    return all[static_cast<std::size_t>(index - 1)];
  }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

nlohmann::json read_json(const std::string& path) {
  try {
    return nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void write_out(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write file: " + path);
  out << content;
}

QuboModel load_qubo(const std::string& path) {
  const std::string text = read_file(path);
  if (!text.empty() && (text[0] == '{' || text[0] == '['))
    return qubo_from_json(nlohmann::json::parse(text));
  return import_qubo_coo(text);
}

nlohmann::json decode_to_json(const QuboModel& q, const Bitstring& bits) {
  nlohmann::json j;
  j["bits"] = bits;
  j["energy"] = q.energy(bits);
  if (q.family && q.source) {
    auto sol = decode(q, bits);
    j["feasible"] = sol.feasible;
    j["opened"] = sol.opened;
    if (sol.feasible) j["objective"] = sol.original_objective;
    nlohmann::json viol = nlohmann::json::array();
    for (const auto& [id, res] : sol.violations)
      viol.push_back({{"constraint", id}, {"residual", res}});
    j["violations"] = viol;
  }
  return j;
}

int dispatch(int argc, char** argv) {
  CLI::App app{
      "QUBO toolkit for discrete location problems: model building, exact "
      "and heuristic solving, variational circuits and relaxations"};
  app.require_subcommand(1);

  // shared option storage
  std::string qubo_path, output, formulation, format = "json";
  std::string strategy, y_path, plan_path, input_path;
  std::optional<double> penalty;
  double eps = 0.1, tol = 1e-4, t_cold = 0.01, t_hot = 0.0;
  int layers = 1, shots = 8000, max_iter = 50, num_reads = 20,
      num_restarts = 0, sweeps = 1000;
  std::uint64_t seed = 0;

  InstanceSource build_src, lp_src;

  auto* build = app.add_subcommand("build", "build a QUBO from an instance");
  build_src.add_options(build);
  build->add_option("--formulation", formulation,
                    "FCFLP formulation: aggregated (default) or disaggregated");
  double penalty_value = 0.0;
  auto* penalty_opt =
      build->add_option("--penalty", penalty_value,
                        "penalty weight override (default: certified bound)");
  build->add_option("-o,--output", output, "output file (default: stdout)");
  build->add_option("--format", format, "output format: json or coo");

  auto* exact = app.add_subcommand("solve-exact", "exact minimum by "
                                   "exhaustive enumeration");
  exact->add_option("--qubo", qubo_path, "QUBO file (json or coo)")
      ->required();
  exact->add_option("-o,--output", output);

  auto* sa = app.add_subcommand("solve-sa", "simulated annealing");
  sa->add_option("--qubo", qubo_path)->required();
  sa->add_option("--num-reads", num_reads, "independent reads (default 20)");
  sa->add_option("--sweeps", sweeps, "sweeps per read (default 1000)");
  sa->add_option("--t-hot", t_hot, "start temperature (default: automatic)");
  sa->add_option("--t-cold", t_cold, "final temperature (default 0.01)");
  sa->add_option("--seed", seed);
  sa->add_option("-o,--output", output);

  auto* tabu = app.add_subcommand("solve-tabu", "tabu search");
  tabu->add_option("--qubo", qubo_path)->required();
  tabu->add_option("--num-restarts", num_restarts,
                   "random restarts (default 0)");
  tabu->add_option("--seed", seed);
  tabu->add_option("-o,--output", output);

  auto* qaoa = app.add_subcommand("solve-qaoa", "variational circuit with "
                                  "uniform start");
  qaoa->add_option("--qubo", qubo_path)->required();
  qaoa->add_option("--layers", layers, "circuit depth p (default 1)");
  qaoa->add_option("--shots", shots, "measurement shots (default 8000)");
  qaoa->add_option("--max-iter", max_iter,
                   "optimizer evaluation budget (default 50)");
  qaoa->add_option("--tol", tol, "optimizer tolerance (default 1e-4)");
  qaoa->add_option("--seed", seed);
  qaoa->add_option("-o,--output", output);

  auto* wsqaoa = app.add_subcommand("solve-wsqaoa", "variational circuit "
                                    "with a warm start");
  wsqaoa->add_option("--qubo", qubo_path)->required();
  wsqaoa->add_option("--strategy", strategy, "warm start: R, S, L or C")
      ->required();
  wsqaoa->add_option("--eps", eps, "projection margin (default 0.1)");
  wsqaoa->add_option("--y", y_path, "Y matrix JSON (strategy S)");
  wsqaoa->add_option("--layers", layers);
  wsqaoa->add_option("--shots", shots);
  wsqaoa->add_option("--max-iter", max_iter);
  wsqaoa->add_option("--tol", tol);
  wsqaoa->add_option("--seed", seed);
  wsqaoa->add_option("-o,--output", output);

  auto* warm = app.add_subcommand("warmstart", "emit a warm-start point");
  warm->add_option("--qubo", qubo_path)->required();
  warm->add_option("--strategy", strategy, "R, S, L or C")->required();
  warm->add_option("--eps", eps);
  warm->add_option("--y", y_path, "Y matrix JSON (strategy S)");
  warm->add_option("-o,--output", output);

  auto* lp = app.add_subcommand("lp", "solve the LP relaxation exactly");
  lp_src.add_options(lp);
  lp->add_option("--formulation", formulation);
  lp->add_option("-o,--output", output);

  auto* sdp = app.add_subcommand("sdp-data", "emit lifted-matrix relaxation "
                                 "data for an external solver");
  sdp->add_option("--qubo", qubo_path)->required();
  sdp->add_option("-o,--output", output);

  auto* experiment = app.add_subcommand("experiment", "run a plan file");
  experiment->add_option("--plan", plan_path, "plan JSON file")->required();
  experiment->add_option("-o,--output", output);

  auto* report = app.add_subcommand("report", "convert a report to "
                                    "csv/json/plotdata");
  report->add_option("--input", input_path, "report JSON file")->required();
  report->add_option("--format", format, "csv, json or plotdata");
  report->add_option("-o,--output", output);

  CLI11_PARSE(app, argc, argv);

  if (build->parsed()) {
    if (penalty_opt->count() > 0) penalty = penalty_value;
    auto inst = build_src.load();
    std::vector<std::string> warnings;
    auto q = build_qubo(inst, formulation, penalty, &warnings);
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
    if (format == "coo")
      write_out(output, export_qubo_coo(q));
    else if (format == "json")
      write_out(output, qubo_to_json(q).dump(2) + "\n");
    else
      throw ValidationError("format: must be json or coo");
  } else if (exact->parsed()) {
    auto q = load_qubo(qubo_path);
    auto r = brute_force_min(q);
    auto j = decode_to_json(q, r.argmin);
    j["unique"] = r.is_unique;
    write_out(output, j.dump(2) + "\n");
  } else if (sa->parsed()) {
    auto q = load_qubo(qubo_path);
    SaConfig cfg;
    cfg.num_reads = num_reads;
    cfg.sweeps = sweeps;
    cfg.t_hot = t_hot;
    cfg.t_cold = t_cold;
    cfg.seed = seed;
    auto results = simulated_annealing(q, cfg);
    nlohmann::json j;
    j["results"] = heuristic_results_to_json(results);
    j["best"] = decode_to_json(q, results.front().first);
    write_out(output, j.dump(2) + "\n");
  } else if (tabu->parsed()) {
    auto q = load_qubo(qubo_path);
    TabuConfig cfg;
    cfg.num_restarts = num_restarts;
    cfg.seed = seed;
    auto results = tabu_search(q, cfg);
    nlohmann::json j;
    j["results"] = heuristic_results_to_json(results);
    j["best"] = decode_to_json(q, results.front().first);
    write_out(output, j.dump(2) + "\n");
  } else if (qaoa->parsed() || wsqaoa->parsed()) {
    auto q = load_qubo(qubo_path);
    QaoaConfig cfg;
    cfg.layers = layers;
    cfg.shots = shots;
    cfg.max_iter = max_iter;
    cfg.tol = tol;
    cfg.seed = seed;
    QaoaResult r;
    if (qaoa->parsed()) {
      r = run_qaoa(q, cfg);
    } else {
      WarmStartPoint ws;
      if (strategy == "R") {
        ws = strategy_R(q, eps);
      } else if (strategy == "S") {
        if (y_path.empty())
          throw ValidationError("--y: required for strategy S");
        ws = strategy_S(matrix_from_json(read_json(y_path)), eps);
      } else if (strategy == "L" || strategy == "C") {
        if (!q.source)
          throw ValidationError(
              "strategy " + strategy +
              ": the QUBO file must embed its source instance (json format)");
        ws = strategy == "L"
                 ? strategy_L(*q.source, q.formulation, eps)
                 : strategy_C(*q.source, q.formulation, q, eps);
      } else {
        throw ValidationError("--strategy: must be R, S, L or C");
      }
      r = run_ws_qaoa(q, ws, cfg);
    }
    auto j = qaoa_result_to_json(r);
    j["best"] = decode_to_json(q, r.best_sample);
    write_out(output, j.dump(2) + "\n");
  } else if (warm->parsed()) {
    auto q = load_qubo(qubo_path);
    WarmStartPoint ws;
    if (strategy == "R") {
      ws = strategy_R(q, eps);
    } else if (strategy == "S") {
      if (y_path.empty()) throw ValidationError("--y: required for strategy S");
      ws = strategy_S(matrix_from_json(read_json(y_path)), eps);
    } else if (strategy == "L" || strategy == "C") {
      if (!q.source)
        throw ValidationError(
            "strategy " + strategy +
            ": the QUBO file must embed its source instance (json format)");
      ws = strategy == "L" ? strategy_L(*q.source, q.formulation, eps)
                           : strategy_C(*q.source, q.formulation, q, eps);
    } else {
      throw ValidationError("--strategy: must be R, S, L or C");
    }
    write_out(output, warmstart_to_json(ws).dump(2) + "\n");
  } else if (lp->parsed()) {
    auto inst = lp_src.load();
    auto sol = solve_lp(lp_relaxation(inst, formulation));
    nlohmann::json j;
    j["status"] = "optimal";
    j["objective"] = static_cast<double>(sol.objective);
    j["objective_exact"] = sol.objective.str();
    bool integral = true;
    std::vector<double> x;
    std::vector<std::string> x_exact;
    for (const auto& v : sol.x) {
      x.push_back(static_cast<double>(v));
      x_exact.push_back(v.str());
      if (boost::multiprecision::denominator(v) != 1) integral = false;
    }
    j["x"] = x;
    j["x_exact"] = x_exact;
    j["integral"] = integral;
    write_out(output, j.dump(2) + "\n");
  } else if (sdp->parsed()) {
    auto q = load_qubo(qubo_path);
    write_out(output, sdp_data_to_json(sdp_relaxation_data(q)).dump(2) + "\n");
  } else if (experiment->parsed()) {
    auto plan = plan_from_json(read_json(plan_path));
    auto reports = run_experiment(plan);
    write_out(output, emit_report(reports, "json"));
    nlohmann::json table = feasibility_table(reports);
    std::cerr << "feasibility: " << table.dump() << "\n";
  } else if (report->parsed()) {
    auto reports = report_from_json(read_json(input_path));
    write_out(output, emit_report(reports, format));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return dispatch(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
