#pragma once

// Objective evaluation of first-stage decisions.

#include <string>
#include <vector>

#include "riskstage/feasible.hpp"
#include "riskstage/model.hpp"
#include "riskstage/risk.hpp"

namespace riskstage {

namespace detail {
inline void check_length(const TwoStageInstance& inst, const Choice& x) {
  if (static_cast<int>(x.size()) != inst.n) throw ValidationError("decision vector must have n entries");
  for (auto v : x)
    if (v > 1) throw ValidationError("decision vector entries must be 0 or 1");
}
}  // namespace detail

inline bool is_partial_solution(const TwoStageInstance& inst, const Choice& x) {
  detail::check_length(inst, x);
  return RecourseSolver(inst).completable(x);
}

inline Completion recourse_cost(const TwoStageInstance& inst, const Choice& x, int scenario) {
  detail::check_length(inst, x);
  if (scenario < 0 || scenario >= inst.scenario_count()) throw DomainError("scenario index out of range");
  return RecourseSolver(inst).solve(x, scenario);
}

/// Second-stage cost distribution induced by x under `solver`'s instance.
inline DiscreteDistribution induced_distribution(const RecourseSolver& solver, const Choice& x) {
  const auto& inst = solver.instance();
  std::vector<Atom> atoms;
  atoms.reserve(inst.scenario_count());
  for (int j = 0; j < inst.scenario_count(); ++j) atoms.push_back({solver.solve(x, j).cost, inst.probabilities[j]});
  return DiscreteDistribution(std::move(atoms));
}

inline DiscreteDistribution induced_distribution(const TwoStageInstance& inst, const Choice& x) {
  detail::check_length(inst, x);
  return induced_distribution(RecourseSolver(inst), x);
}

/// C x + F[Y^x] with optimal recourse in every scenario.
inline double evaluate_first_stage(const RecourseSolver& solver, const Choice& x, const Objective& objective) {
  return first_stage_cost(solver.instance(), x) + objective.apply(induced_distribution(solver, x));
}

inline double evaluate_first_stage(const TwoStageInstance& inst, const Choice& x, const Objective& objective) {
  detail::check_length(inst, x);
  return evaluate_first_stage(RecourseSolver(inst), x, objective);
}

/// C x + F[c_j y_j] using the plan's own recourse vectors, which must be legal.
inline double evaluate_plan(const TwoStageInstance& inst, const TwoStagePlan& plan, const Objective& objective) {
  detail::check_length(inst, plan.x);
  if (plan.recourse.size() != inst.probabilities.size())
    throw ValidationError("plan needs one recourse vector per scenario");
  std::vector<Atom> atoms;
  for (int j = 0; j < inst.scenario_count(); ++j) {
    detail::check_length(inst, plan.recourse[j]);
    if (!is_feasible_completion(inst, plan.x, plan.recourse[j]))
      throw InfeasibleError("plan recourse is not a feasible completion", j);
    atoms.push_back({scenario_cost(inst, plan.recourse[j], j), inst.probabilities[j]});
  }
  return first_stage_cost(inst, plan.x) + objective.apply(DiscreteDistribution(std::move(atoms)));
}

/// Report for first stage x with optimal recourse filled in.
inline SolveReport make_report(const RecourseSolver& solver, const Choice& x, const Objective& objective,
                               std::string algorithm) {
  const auto& inst = solver.instance();
  SolveReport r;
  r.objective = objective;
  r.algorithm = std::move(algorithm);
  r.plan.x = x;
  std::vector<Atom> atoms;
  for (int j = 0; j < inst.scenario_count(); ++j) {
    auto completion = solver.solve(x, j);
    r.per_scenario_cost.push_back(completion.cost);
    atoms.push_back({completion.cost, inst.probabilities[j]});
    r.plan.recourse.push_back(std::move(completion.y));
  }
  r.value = first_stage_cost(inst, x) + objective.apply(DiscreteDistribution(std::move(atoms)));
  return r;
}

inline SolveReport make_report(const TwoStageInstance& inst, const Choice& x, const Objective& objective,
                               std::string algorithm) {
  detail::check_length(inst, x);
  return make_report(RecourseSolver(inst), x, objective, std::move(algorithm));
}

}  // namespace riskstage
