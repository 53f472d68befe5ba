// riskstage command-line front end.

#include <algorithm>
#include <cmath>
#include <limits>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "riskstage/riskstage.hpp"

using namespace riskstage;

namespace {

// Exit codes.
constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kAlgorithmFailure = 2;

struct UsageError : Error {
  using Error::Error;
};

std::string read_text(const std::string& path) {
  if (path == "-") return {std::istreambuf_iterator<char>(std::cin), {}};
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  return {std::istreambuf_iterator<char>(in), {}};
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write " + path);
  out << text;
}

json read_json(const std::string& path) {
  try {
    return json::parse(read_text(path));
  } catch (const json::exception& e) {
    throw UsageError(path + ": " + e.what());
  }
}

Objective make_objective(const std::string& name, double alpha) {
  if (name == "expectation") return Objective::expected();
  if (name == "robust") return Objective::robust();
  if (name == "cvar") {
    if (!(alpha >= 0.0 && alpha < 1.0)) throw UsageError("--alpha must lie in [0,1) for cvar");
    return Objective::conditional(alpha);
  }
  throw UsageError("unknown objective " + name);
}

const std::vector<std::string>& algorithm_ids() {
  static const std::vector<std::string> ids{"brute",         "rs-expectation", "rs-lp2-robust",  "rs-lp2-cvar",
                                            "selection-dp",  "selection-rr",   "sp-dp",          "connectivity",
                                            "mst-rr-robust", "mst-rr-expectation"};
  return ids;
}

void require(const TwoStageInstance& inst, Family f, const std::string& algo) {
  if (inst.family != f)
    throw UsageError(algo + " needs a " + to_string(f) + " instance, got " + to_string(inst.family));
}

/// Runs one algorithm. Rounding failures surface as InfeasibleError.
SolveReport run_algorithm(const TwoStageInstance& inst, const std::string& algo, const Objective& objective,
                          std::optional<std::uint64_t> seed) {
  if (algo == "brute") return brute_force_optimum(inst, objective);
  if (algo == "rs-expectation") {
    require(inst, Family::rs, algo);
    return rs_solve_expectation(inst);
  }
  if (algo == "rs-lp2-robust") {
    require(inst, Family::rs, algo);
    return rs_lp_round_robust(inst);
  }
  if (algo == "rs-lp2-cvar") {
    require(inst, Family::rs, algo);
    return rs_lp_round_cvar(inst, objective.kind == Objective::Kind::cvar ? objective.alpha : 0.0);
  }
  if (algo == "selection-dp") {
    require(inst, Family::selection, algo);
    return selection_dp_expectation(inst);
  }
  if (algo == "sp-dp") {
    require(inst, Family::shortest_path, algo);
    return sp_dp_expectation(inst);
  }
  if (algo == "connectivity") {
    require(inst, Family::shortest_path, algo);
    return connectivity_solve(inst, objective.kind == Objective::Kind::cvar ? objective.alpha : 0.0);
  }
  if (algo == "selection-rr" || algo == "mst-rr-robust" || algo == "mst-rr-expectation") {
    if (!seed) throw UsageError(algo + " is randomized and needs --seed");
    if (algo == "selection-rr") {
      require(inst, Family::selection, algo);
      auto out = selection_randomized_rounding(inst, *seed);
      if (!out.report) throw InfeasibleError("rounding failed and repair ran out of items");
      return *out.report;
    }
    require(inst, Family::spanning_tree, algo);
    auto out = mst_randomized_rounding(inst, *seed,
                                       algo == "mst-rr-robust" ? MstVariant::robust : MstVariant::expectation);
    if (!out.report) throw InfeasibleError("rounding failed and repair ran out of edges");
    return *out.report;
  }
  throw UsageError("unknown algorithm " + algo);
}

std::string format_number(double v) {
  std::ostringstream os;
  os << std::setprecision(10) << v;
  return os.str();
}

std::string report_table(const SolveReport& r) {
  std::ostringstream os;
  os << "algorithm   " << r.algorithm << "\n";
  os << "objective   " << r.objective.name();
  if (r.objective.kind == Objective::Kind::cvar) os << " (alpha " << r.objective.alpha << ")";
  os << "\nvalue       " << format_number(r.value) << "\n";
  if (r.lower_bound) os << "lower bound " << format_number(*r.lower_bound) << "\n";
  os << "first stage";
  for (int i : support(r.plan.x)) os << " " << i;
  os << "\n";
  for (std::size_t j = 0; j < r.plan.recourse.size(); ++j) {
    os << "scenario " << j << "  cost " << format_number(r.per_scenario_cost[j]) << "  buys";
    for (int i : support(r.plan.recourse[j])) os << " " << i;
    os << "\n";
  }
  return os.str();
}

SetCoverInput read_setcover(int universe, const std::string& path) {
  // Sets are listed with elements numbered 1..universe.
  SetCoverInput sc;
  sc.universe = universe;
  for (const auto& set : read_json(path)) {
    std::vector<int> s;
    for (int u : set.get<std::vector<int>>()) s.push_back(u - 1);
    sc.sets.push_back(std::move(s));
  }
  return sc;
}

Family parse_family_name(const std::string& s) {
  for (Family f : {Family::selection, Family::rs, Family::shortest_path, Family::spanning_tree, Family::assignment})
    if (to_string(f) == s) return f;
  throw UsageError("unknown family " + s);
}

struct BenchRow {
  int trial = 0;
  std::uint64_t seed = 0;
  std::optional<double> value, opt, ratio, bound;
  std::optional<bool> ok;
  std::string note;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-stage combinatorial optimization under risk"};
  app.require_subcommand(1);

  std::string input = "-", output, algorithm = "brute", objective_name = "expectation", format = "json";
  double alpha = 0.0;
  std::optional<std::uint64_t> seed;

  auto add_objective = [&](CLI::App* cmd) {
    cmd->add_option("--objective", objective_name, "expectation, robust or cvar")
        ->check(CLI::IsMember({"expectation", "robust", "cvar"}));
    cmd->add_option("--alpha", alpha, "CVaR level in [0,1)");
  };

  auto* solve = app.add_subcommand("solve", "Solve an instance and print a report");
  solve->add_option("-i,--input", input, "instance JSON, - for stdin");
  solve->add_option("-o,--output", output, "report destination, stdout by default");
  solve->add_option("-a,--algorithm", algorithm)->check(CLI::IsMember(algorithm_ids()));
  solve->add_option("--seed", seed, "seed for randomized algorithms");
  solve->add_option("--format", format)->check(CLI::IsMember({"json", "table"}));
  add_objective(solve);

  auto* evaluate = app.add_subcommand("evaluate", "Evaluate a given first-stage vector");
  std::string first_stage;
  evaluate->add_option("-i,--input", input);
  evaluate->add_option("-o,--output", output);
  evaluate->add_option("-x,--first-stage", first_stage, "comma-separated element ids bought now")->required();
  evaluate->add_option("--format", format)->check(CLI::IsMember({"json", "table"}));
  add_objective(evaluate);

  auto* gen = app.add_subcommand("gen", "Generate gadget or random instances");
  gen->require_subcommand(1);
  int universe = 0;
  std::string sets_path, graph_path, cnf_path, chain_target = "shortest-path";
  auto* gen_rs = gen->add_subcommand("rs-setcover", "RS instance from a set cover input");
  auto* gen_sp = gen->add_subcommand("sp-setcover", "series-parallel network from a set cover input");
  for (auto* c : {gen_rs, gen_sp}) {
    c->add_option("--universe", universe)->required();
    c->add_option("--sets", sets_path, "JSON list of sets over 1..universe")->required();
    c->add_option("-o,--output", output);
  }
  auto* gen_ham = gen->add_subcommand("sp-hamiltonian", "doubled network from a digraph");
  gen_ham->add_option("--graph", graph_path, "JSON {nodes, arcs, first, last}")->required();
  gen_ham->add_option("-o,--output", output);
  auto* gen_sat = gen->add_subcommand("sp-sat", "network from a CNF formula");
  gen_sat->add_option("--cnf", cnf_path, "JSON {variables, clauses} with signed 1-based literals")->required();
  gen_sat->add_option("-o,--output", output);
  auto* gen_chain_cmd = gen->add_subcommand("chain", "path network from a singleton-group RS instance");
  gen_chain_cmd->add_option("-i,--input", input);
  gen_chain_cmd->add_option("--target", chain_target)->check(CLI::IsMember({"shortest-path", "spanning-tree"}));
  gen_chain_cmd->add_option("-o,--output", output);
  auto* gen_rand = gen->add_subcommand("random", "seeded random instance");
  RandomSpec spec;
  std::string family_name = "selection", mode_name = "exact";
  gen_rand->add_option("--family", family_name)->required();
  gen_rand->add_option("--size", spec.size, "elements, nodes or side size");
  gen_rand->add_option("--scenarios", spec.scenarios);
  gen_rand->add_option("--seed", spec.seed)->required();
  gen_rand->add_option("--cost-lo", spec.cost_lo);
  gen_rand->add_option("--cost-hi", spec.cost_hi);
  gen_rand->add_option("--mode", mode_name)->check(CLI::IsMember({"exact", "superset"}));
  gen_rand->add_option("--p", spec.p);
  gen_rand->add_option("--groups", spec.groups);
  gen_rand->add_option("--density", spec.density);
  gen_rand->add_flag("--series-parallel", spec.series_parallel);
  gen_rand->add_option("--arcs", spec.arcs);
  gen_rand->add_option("-o,--output", output);

  auto* reduce = app.add_subcommand("reduce", "Apply a reduction");
  reduce->require_subcommand(1);
  auto* sp2a = reduce->add_subcommand("sp-to-assignment", "shortest path on a DAG to assignment");
  sp2a->add_option("-i,--input", input);
  sp2a->add_option("-o,--output", output);

  auto* transform = app.add_subcommand("transform", "Apply a scenario transform");
  transform->require_subcommand(1);
  auto* e2c = transform->add_subcommand("e-to-cvar", "prepend a zero scenario with probability alpha");
  e2c->add_option("-i,--input", input);
  e2c->add_option("-o,--output", output);
  e2c->add_option("--alpha", alpha)->required();

  auto* bench = app.add_subcommand("bench", "Compare an algorithm with brute force on random instances");
  int trials = 20;
  std::uint64_t bench_seed = 0;
  bench->add_option("--family", family_name)->required();
  bench->add_option("-a,--algorithm", algorithm, "an algorithm id, or e-optimal")->required();
  bench->add_option("--trials", trials);
  bench->add_option("--seed", bench_seed)->required();
  bench->add_option("--size", spec.size);
  bench->add_option("--scenarios", spec.scenarios);
  bench->add_option("--cost-hi", spec.cost_hi);
  bench->add_option("--mode", mode_name)->check(CLI::IsMember({"exact", "superset"}));
  bench->add_flag("--series-parallel", spec.series_parallel);
  bench->add_option("--format", format)->check(CLI::IsMember({"json", "table"}));
  add_objective(bench);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  try {
    if (solve->parsed()) {
      const auto inst = parse_instance(read_text(input));
      const auto objective = make_objective(objective_name, alpha);
      const auto report = run_algorithm(inst, algorithm, objective, seed);
      write_text(output, format == "table" ? report_table(report) : serialize_report(report));
    } else if (evaluate->parsed()) {
      const auto inst = parse_instance(read_text(input));
      const auto objective = make_objective(objective_name, alpha);
      std::vector<int> ids;
      std::stringstream ss(first_stage);
      for (std::string tok; std::getline(ss, tok, ',');)
        if (!tok.empty()) ids.push_back(std::stoi(tok));
      for (int i : ids)
        if (i < 0 || i >= inst.n) throw UsageError("first-stage id " + std::to_string(i) + " out of range");
      const auto report = make_report(inst, indicator(inst.n, ids), objective, "evaluate");
      write_text(output, format == "table" ? report_table(report) : serialize_report(report));
    } else if (gen_rs->parsed()) {
      write_text(output, serialize_instance(gen_rs_setcover(read_setcover(universe, sets_path))));
    } else if (gen_sp->parsed()) {
      write_text(output, serialize_instance(gen_sp_setcover(read_setcover(universe, sets_path))));
    } else if (gen_ham->parsed()) {
      const auto doc = read_json(graph_path);
      Digraph g;
      g.node_count = doc.at("nodes").get<int>();
      for (const auto& a : doc.at("arcs")) g.arcs.push_back({a.at(0).get<int>(), a.at(1).get<int>()});
      write_text(output, serialize_instance(gen_sp_hamiltonian(g, doc.at("first").get<int>(),
                                                               doc.at("last").get<int>())));
    } else if (gen_sat->parsed()) {
      const auto doc = read_json(cnf_path);
      CnfInput f{doc.at("variables").get<int>(), doc.at("clauses").get<std::vector<std::vector<int>>>()};
      write_text(output, serialize_instance(gen_sp_sat(f)));
    } else if (gen_chain_cmd->parsed()) {
      const auto inst = parse_instance(read_text(input));
      write_text(output, serialize_instance(gen_chain(
                             inst, chain_target == "spanning-tree" ? Family::spanning_tree : Family::shortest_path)));
    } else if (gen_rand->parsed()) {
      spec.family = parse_family_name(family_name);
      spec.mode = mode_name == "superset" ? FeasibleMode::superset : FeasibleMode::exact;
      write_text(output, serialize_instance(gen_random(spec)));
    } else if (sp2a->parsed()) {
      write_text(output, serialize_instance(sp_to_assignment(parse_instance(read_text(input)))));
    } else if (e2c->parsed()) {
      write_text(output, serialize_instance(augment_with_zero_scenario(parse_instance(read_text(input)), alpha)));
    } else if (bench->parsed()) {
      spec.family = parse_family_name(family_name);
      spec.mode = mode_name == "superset" ? FeasibleMode::superset : FeasibleMode::exact;
      const auto objective = make_objective(objective_name, alpha);
      if (algorithm != "e-optimal" &&
          std::find(algorithm_ids().begin(), algorithm_ids().end(), algorithm) == algorithm_ids().end())
        throw UsageError("unknown algorithm " + algorithm);
      std::vector<BenchRow> rows;
      for (int t = 0; t < trials; ++t) {
        BenchRow row;
        row.trial = t;
        row.seed = bench_seed + static_cast<std::uint64_t>(t);
        try {
          RandomSpec s = spec;
          s.seed = row.seed;
          const auto inst = gen_random(s);
          Objective target = objective;
          std::optional<double> bound;
          if (algorithm == "e-optimal") {
            // The expectation optimum judged under the requested objective.
            const auto e_opt = brute_force_optimum(inst, Objective::expected());
            row.value = evaluate_first_stage(inst, e_opt.plan.x, objective);
            bound = cvar_ratio_sigma(objective.kind == Objective::Kind::cvar ? objective.alpha : 0.0,
                                     *std::min_element(inst.probabilities.begin(), inst.probabilities.end()));
          } else {
            const auto r = run_algorithm(inst, algorithm, objective, row.seed);
            target = r.objective;
            row.value = r.value;
            if (algorithm == "rs-lp2-robust") bound = 2.0;
            else if (algorithm == "rs-lp2-cvar")
              bound = std::min(2.0, 1.0 / (1.0 - target.alpha));
            else if (algorithm != "selection-rr" && algorithm != "mst-rr-robust" && algorithm != "mst-rr-expectation")
              bound = 1.0;
          }
          row.opt = brute_force_optimum(inst, target).value;
          const double tol = 1e-9 * std::max(1.0, *row.opt);
          if (*row.opt > tol) row.ratio = *row.value / *row.opt;
          else row.ratio = *row.value <= tol ? 1.0 : std::numeric_limits<double>::infinity();
          row.bound = bound;
          if (bound) row.ok = *row.value <= *bound * *row.opt + tol;
        } catch (const Error& e) {
          row.note = e.what();
        }
        rows.push_back(row);
      }
      double max_ratio = 0.0;
      int violations = 0, errors = 0;
      for (const auto& r : rows) {
        if (r.ratio) max_ratio = std::max(max_ratio, *r.ratio);
        if (r.ok && !*r.ok) ++violations;
        if (!r.note.empty()) ++errors;
      }
      std::ostringstream os;
      if (format == "table") {
        os << "trial  seed  value  opt  ratio  bound  ok\n";
        auto cell = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string("-"); };
        for (const auto& r : rows) {
          os << r.trial << "  " << r.seed << "  " << cell(r.value) << "  " << cell(r.opt) << "  " << cell(r.ratio)
             << "  " << cell(r.bound) << "  " << (r.ok ? (*r.ok ? "yes" : "NO") : "-");
          if (!r.note.empty()) os << "  " << r.note;
          os << "\n";
        }
        os << "max ratio " << format_number(max_ratio) << ", violations " << violations << ", errors " << errors
           << "\n";
      } else {
        json doc;
        doc["trials"] = json::array();
        for (const auto& r : rows) {
          json t;
          t["trial"] = r.trial;
          t["seed"] = r.seed;
          t["value"] = r.value ? json(*r.value) : json(nullptr);
          t["opt"] = r.opt ? json(*r.opt) : json(nullptr);
          t["ratio"] = r.ratio && std::isfinite(*r.ratio) ? json(*r.ratio) : json(nullptr);
          t["bound"] = r.bound ? json(*r.bound) : json(nullptr);
          t["bound_satisfied"] = r.ok ? json(*r.ok) : json(nullptr);
          if (!r.note.empty()) t["error"] = r.note;
          doc["trials"].push_back(t);
        }
        doc["summary"] = {{"max_ratio", max_ratio}, {"violations", violations}, {"errors", errors}};
        os << doc.dump(2) << "\n";
      }
      write_text(output, os.str());
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ValidationError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kUsage;
  } catch (const DomainError& e) {
    std::cerr << "invalid parameter: " << e.what() << "\n";
    return kUsage;
  } catch (const UnsupportedError& e) {
    std::cerr << "unsupported: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "algorithm failure: " << e.what() << "\n";
    return kAlgorithmFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kOk;
}
