#pragma once

// Representatives selection and cardinality selection: exact algorithms, LP
// rounding and randomized rounding.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

#include "riskstage/evaluate.hpp"
#include "riskstage/lp.hpp"
#include "riskstage/model.hpp"
#include "riskstage/random.hpp"

namespace riskstage {

namespace detail {

inline void require_family(const TwoStageInstance& inst, Family f, const char* algorithm) {
  validate(inst);
  if (inst.family != f)
    throw UnsupportedError(std::string(algorithm) + " needs a " + to_string(f) + " instance, got " +
                           to_string(inst.family));
}

/// Element of each group with the smallest first-stage cost (lowest id on ties).
inline std::vector<int> cheapest_first_stage_tools(const TwoStageInstance& inst) {
  std::vector<int> out;
  for (const auto& group : inst.groups().groups) {
    int best = group.front();
    for (int i : group)
      if (inst.first_stage[i] < inst.first_stage[best] || (inst.first_stage[i] == inst.first_stage[best] && i < best))
        best = i;
    out.push_back(best);
  }
  return out;
}

/// First stage of the original RS instance from per-group purchase flags.
inline Choice lift_group_choice(const TwoStageInstance& inst, const std::vector<bool>& buy) {
  const auto tools = cheapest_first_stage_tools(inst);
  Choice x(inst.n, 0);
  for (std::size_t g = 0; g < tools.size(); ++g)
    if (buy[g]) x[tools[g]] = 1;
  return x;
}

}  // namespace detail

/// One tool per group carrying the group minima of the first-stage cost and of
/// every scenario cost. Element g of the result stands for group g.
inline TwoStageInstance rs_normalize(const TwoStageInstance& inst) {
  detail::require_family(inst, Family::rs, "rs_normalize");
  const auto& groups = inst.groups().groups;
  const int g_count = static_cast<int>(groups.size());
  TwoStageInstance out = inst;
  out.n = g_count;
  out.first_stage.assign(g_count, 0.0);
  out.scenario_costs.assign(inst.scenario_count(), std::vector<double>(g_count, 0.0));
  RsPartition part;
  for (int g = 0; g < g_count; ++g) {
    double c = graph::kInf;
    for (int i : groups[g]) c = std::min(c, inst.first_stage[i]);
    out.first_stage[g] = c;
    for (int j = 0; j < inst.scenario_count(); ++j) {
      double s = graph::kInf;
      for (int i : groups[g]) s = std::min(s, inst.scenario_costs[j][i]);
      out.scenario_costs[j][g] = s;
    }
    part.groups.push_back({g});
  }
  out.structure = part;
  return out;
}

/// Exact expectation optimum: buy a group now iff its first-stage cost is at
/// most its expected deferred cost.
inline SolveReport rs_solve_expectation(const TwoStageInstance& inst) {
  const auto norm = rs_normalize(inst);
  std::vector<bool> buy(norm.n);
  for (int g = 0; g < norm.n; ++g) {
    double deferred = 0.0;
    for (int j = 0; j < norm.scenario_count(); ++j) deferred += norm.probabilities[j] * norm.scenario_costs[j][g];
    buy[g] = norm.first_stage[g] <= deferred;
  }
  return make_report(inst, detail::lift_group_choice(inst, buy), Objective::expected(), "rs-expectation");
}

inline constexpr double kHalfRoundingSlack = 1e-9;

/// LP relaxation of the CVaR model rounded at one half. Returns the better of
/// the rounded first stage and the expectation-optimal one under CVaR_alpha.
inline SolveReport rs_lp_round_cvar(const TwoStageInstance& inst, double alpha) {
  const auto objective = Objective::conditional(alpha);
  const auto norm = rs_normalize(inst);
  const int g_count = norm.n;
  const int k = norm.scenario_count();
  LpProblem lp;
  for (int g = 0; g < g_count; ++g) lp.add_variable(0.0, 1.0, norm.first_stage[g]);
  const int gamma_pos = lp.add_variable(0.0, LpProblem::kInf, 1.0);
  const int gamma_neg = lp.add_variable(0.0, LpProblem::kInf, -1.0);
  for (int j = 0; j < k; ++j) {
    const int u = lp.add_variable(0.0, LpProblem::kInf, norm.probabilities[j] / (1.0 - alpha));
    std::vector<std::pair<int, double>> row{{u, 1.0}, {gamma_pos, 1.0}, {gamma_neg, -1.0}};
    double rhs = 0.0;
    for (int g = 0; g < g_count; ++g) {
      row.push_back({g, norm.scenario_costs[j][g]});
      rhs += norm.scenario_costs[j][g];
    }
    lp.add_row(std::move(row), Relation::ge, rhs);
  }
  const auto sol = lp_solve(lp);
  if (sol.verdict != LpVerdict::optimal) throw Error("CVaR relaxation did not reach an optimum");
  std::vector<bool> buy(g_count);
  for (int g = 0; g < g_count; ++g) buy[g] = sol.values[g] >= 0.5 - kHalfRoundingSlack;

  RecourseSolver solver(inst);
  auto rounded = make_report(solver, detail::lift_group_choice(inst, buy), objective, "rs-lp2-cvar");
  auto fallback = make_report(solver, rs_solve_expectation(inst).plan.x, objective, "rs-lp2-cvar");
  auto& best = fallback.value < rounded.value ? fallback : rounded;
  best.lower_bound = sol.objective_value;
  return best;
}

/// LP relaxation of the robust model rounded at one half.
inline SolveReport rs_lp_round_robust(const TwoStageInstance& inst) {
  const auto norm = rs_normalize(inst);
  const int g_count = norm.n;
  LpProblem lp;
  for (int g = 0; g < g_count; ++g) lp.add_variable(0.0, 1.0, 0.0);
  const int budget = lp.add_variable(0.0, LpProblem::kInf, 1.0);
  for (int j = 0; j < norm.scenario_count(); ++j) {
    // C x + sum_g c_gj (1 - x_g) <= L
    std::vector<std::pair<int, double>> row{{budget, -1.0}};
    double rhs = 0.0;
    for (int g = 0; g < g_count; ++g) {
      row.push_back({g, norm.first_stage[g] - norm.scenario_costs[j][g]});
      rhs -= norm.scenario_costs[j][g];
    }
    lp.add_row(std::move(row), Relation::le, rhs);
  }
  const auto sol = lp_solve(lp);
  if (sol.verdict != LpVerdict::optimal) throw Error("robust relaxation did not reach an optimum");
  std::vector<bool> buy(g_count);
  for (int g = 0; g < g_count; ++g) buy[g] = sol.values[g] >= 0.5 - kHalfRoundingSlack;
  auto report = make_report(inst, detail::lift_group_choice(inst, buy), Objective::robust(), "rs-lp2-robust");
  report.lower_bound = sol.objective_value;
  return report;
}

/// Values v_i(L, l_1..l_K) of the selection dynamic program: the cheapest
/// expected cost of placing the first i items so that L of them are bought in
/// the first stage and l_j are bought in scenario j.
class DpTable {
 public:
  DpTable(int n, int p, int k) : n_(n), p_(p), k_(k) {
    states_ = 1;
    for (int d = 0; d <= k; ++d) states_ *= static_cast<std::size_t>(p + 1);
    values_.assign(n + 1, std::vector<double>(states_, graph::kInf));
    moves_.assign(n + 1, std::vector<int>(states_, -1));
  }

  int items() const { return n_; }
  int p() const { return p_; }
  int scenarios() const { return k_; }
  std::size_t states() const { return states_; }

  /// v_i(L, l); +inf when the state is unreachable.
  double value(int i, int first, const std::vector<int>& second) const {
    if (first < 0 || first > p_) return graph::kInf;
    for (int l : second)
      if (l < 0 || l > p_) return graph::kInf;
    return values_.at(i).at(encode(first, second));
  }

  std::size_t encode(int first, const std::vector<int>& second) const {
    std::size_t code = static_cast<std::size_t>(first);
    for (int j = 0; j < k_; ++j) code = code * (p_ + 1) + second[j];
    return code;
  }

  void decode(std::size_t code, int& first, std::vector<int>& second) const {
    second.assign(k_, 0);
    for (int j = k_ - 1; j >= 0; --j) {
      second[j] = static_cast<int>(code % (p_ + 1));
      code /= (p_ + 1);
    }
    first = static_cast<int>(code);
  }

  std::vector<std::vector<double>>& raw_values() { return values_; }
  std::vector<std::vector<int>>& raw_moves() { return moves_; }
  const std::vector<std::vector<int>>& raw_moves() const { return moves_; }
  const std::vector<std::vector<double>>& raw_values() const { return values_; }

 private:
  int n_, p_, k_;
  std::size_t states_ = 1;
  std::vector<std::vector<double>> values_;
  std::vector<std::vector<int>> moves_;  // 0 skip, 1 first stage, 1 + S for scenario subset S
};

inline constexpr int kSelectionDpMaxScenarios = 6;
inline constexpr std::size_t kSelectionDpStateGuard = 20'000'000;

/// Fills the selection dynamic program for an instance with at most six
/// scenarios.
inline DpTable selection_dp_table(const TwoStageInstance& inst) {
  detail::require_family(inst, Family::selection, "selection_dp");
  const int k = inst.scenario_count();
  if (k > kSelectionDpMaxScenarios) throw GuardError("selection dynamic program supports at most 6 scenarios");
  const int p = inst.cardinality().p;
  const int n = inst.n;
  double states = std::pow(p + 1.0, k + 1) * (n + 1);
  if (states > static_cast<double>(kSelectionDpStateGuard))
    throw GuardError("selection dynamic program state space exceeds its guard");
  DpTable table(n, p, k);
  auto& v = table.raw_values();
  auto& move = table.raw_moves();
  v[0][0] = 0.0;
  move[0][0] = 0;
  const int subsets = 1 << k;
  int first;
  std::vector<int> second;
  for (int i = 0; i < n; ++i) {
    const auto& cur = v[i];
    auto& next = v[i + 1];
    auto& next_move = move[i + 1];
    auto relax = [&](std::size_t code, double value, int m) {
      if (value < next[code]) {
        next[code] = value;
        next_move[code] = m;
      }
    };
    for (std::size_t code = 0; code < table.states(); ++code) {
      if (cur[code] == graph::kInf) continue;
      table.decode(code, first, second);
      relax(code, cur[code], 0);
      const int most = *std::max_element(second.begin(), second.end());
      if (first + most + 1 <= p) relax(table.encode(first + 1, second), cur[code] + inst.first_stage[i], 1);
      for (int s = 1; s < subsets; ++s) {
        bool fits = true;
        double cost = cur[code];
        auto after = second;
        for (int j = 0; j < k && fits; ++j)
          if (s >> j & 1) {
            if (first + after[j] + 1 > p) fits = false;
            ++after[j];
            cost += inst.probabilities[j] * inst.scenario_costs[j][i];
          }
        if (fits) relax(table.encode(first, after), cost, 1 + s);
      }
    }
  }
  return table;
}

/// Exact expectation optimum of cardinality selection.
inline SolveReport selection_dp_expectation(const TwoStageInstance& inst) {
  const auto table = selection_dp_table(inst);
  const int n = inst.n, p = table.p(), k = table.scenarios();
  const auto& last = table.raw_values()[n];
  std::size_t best = 0;
  double best_value = graph::kInf;
  int first;
  std::vector<int> second;
  for (std::size_t code = 0; code < table.states(); ++code) {
    if (last[code] == graph::kInf) continue;
    table.decode(code, first, second);
    if (std::any_of(second.begin(), second.end(), [&](int l) { return first + l != p; })) continue;
    if (last[code] < best_value) {
      best_value = last[code];
      best = code;
    }
  }
  if (best_value == graph::kInf) throw InfeasibleError("no selection of p items exists");
  Choice x(n, 0);
  std::size_t code = best;
  for (int i = n; i > 0; --i) {
    const int m = table.raw_moves()[i][code];
    table.decode(code, first, second);
    if (m == 1) {
      x[i - 1] = 1;
      --first;
    } else if (m > 1) {
      for (int j = 0; j < k; ++j)
        if ((m - 1) >> j & 1) --second[j];
    }
    code = table.encode(first, second);
  }
  return make_report(inst, x, Objective::expected(), "selection-dp");
}

/// Fractional optimum of the budget-filtered selection relaxation at the
/// smallest feasible budget.
struct SelectionLp {
  double budget = 0.0;                 // L*
  std::vector<double> x;               // x*_i
  std::vector<std::vector<double>> y;  // y*_ij, one row per scenario
  std::vector<char> first_pool;        // i in E(L*)
  std::vector<std::vector<char>> second_pool;  // i in E^j(L*)
};

inline LpProblem selection_lp_problem(const TwoStageInstance& inst, double budget) {
  const int n = inst.n, k = inst.scenario_count();
  const int p = inst.cardinality().p;
  LpProblem lp;
  for (int i = 0; i < n; ++i) lp.add_variable(0.0, inst.first_stage[i] <= budget ? 1.0 : 0.0);
  for (int j = 0; j < k; ++j)
    for (int i = 0; i < n; ++i)
      lp.add_variable(0.0, inst.probabilities[j] * inst.scenario_costs[j][i] <= budget ? 1.0 : 0.0);
  auto y = [&](int j, int i) { return n + j * n + i; };
  std::vector<std::pair<int, double>> total;
  for (int i = 0; i < n; ++i) total.push_back({i, inst.first_stage[i]});
  for (int j = 0; j < k; ++j)
    for (int i = 0; i < n; ++i) total.push_back({y(j, i), inst.probabilities[j] * inst.scenario_costs[j][i]});
  lp.add_row(std::move(total), Relation::le, budget);
  const Relation count = inst.mode == FeasibleMode::exact ? Relation::eq : Relation::ge;
  for (int j = 0; j < k; ++j) {
    std::vector<std::pair<int, double>> row;
    for (int i = 0; i < n; ++i) {
      row.push_back({i, 1.0});
      row.push_back({y(j, i), 1.0});
    }
    lp.add_row(std::move(row), count, p);
    for (int i = 0; i < n; ++i) lp.add_row({{i, 1.0}, {y(j, i), 1.0}}, Relation::le, 1.0);
  }
  return lp;
}

inline SelectionLp selection_lp_budget(const TwoStageInstance& inst) {
  detail::require_family(inst, Family::selection, "selection_lp_budget");
  const int n = inst.n, k = inst.scenario_count();
  double hi = 0.0;
  for (int i = 0; i < n; ++i) hi += inst.first_stage[i];
  for (int j = 0; j < k; ++j)
    for (int i = 0; i < n; ++i) hi += inst.probabilities[j] * inst.scenario_costs[j][i];
  const auto found =
      min_feasible_budget([&](double budget) { return selection_lp_problem(inst, budget); }, 0.0, hi);
  SelectionLp out;
  out.budget = found.budget;
  const auto& v = found.witness.values;
  out.x.assign(v.begin(), v.begin() + n);
  out.first_pool.assign(n, 0);
  for (int i = 0; i < n; ++i) out.first_pool[i] = inst.first_stage[i] <= out.budget;
  out.y.assign(k, std::vector<double>(n));
  out.second_pool.assign(k, std::vector<char>(n, 0));
  for (int j = 0; j < k; ++j)
    for (int i = 0; i < n; ++i) {
      out.y[j][i] = v[n + j * n + i];
      out.second_pool[j][i] = inst.probabilities[j] * inst.scenario_costs[j][i] <= out.budget;
    }
  return out;
}

/// ceil(335 ln n + 40 ln 2K).
inline int selection_k_hat(int n, int k) {
  return static_cast<int>(std::ceil(335.0 * std::log(static_cast<double>(n)) + 40.0 * std::log(2.0 * k)));
}

/// Bound on the normalized rounded cost that holds with probability at least
/// 1 - 1/(2n^2): k + (e - 1) sqrt(k ln(2 n^2)).
inline double selection_cost_envelope(int k_hat, int n) {
  const double kh = k_hat;
  return kh + (std::exp(1.0) - 1.0) * std::sqrt(kh * std::log(2.0 * n * n));
}

struct RoundingTrace {
  std::uint64_t seed = 0;
  int k_hat = 0;
  double budget = 0.0;                   // L*, unscaled
  std::vector<int> first;                // X
  std::vector<std::vector<int>> second;  // Y^j, disjoint from X
  bool failed = false;
  std::vector<int> repair_added;
  double rounded_cost = 0.0;             // C(X) + sum_j p_j c_j(Y^j) before repair and trimming
  double normalized_cost = 0.0;          // rounded_cost / L* (0 when L* = 0)
};

struct RoundingOutcome {
  std::optional<SolveReport> report;  // empty on failure
  RoundingTrace trace;
};

namespace detail {

inline bool covers(const RoundingTrace& t, int p) {
  for (const auto& y : t.second)
    if (static_cast<int>(t.first.size() + y.size()) < p) return false;
  return true;
}

}  // namespace detail

/// Adds items of E(L*) \ X to X by ascending first-stage cost (then id) until
/// every scenario has p items or the pool runs out.
inline RoundingTrace selection_repair(const TwoStageInstance& inst, RoundingTrace trace) {
  const int p = inst.cardinality().p;
  if (detail::covers(trace, p)) {
    trace.failed = false;
    return trace;
  }
  std::vector<int> pool;
  for (int i = 0; i < inst.n; ++i)
    if (inst.first_stage[i] <= trace.budget &&
        std::find(trace.first.begin(), trace.first.end(), i) == trace.first.end())
      pool.push_back(i);
  std::stable_sort(pool.begin(), pool.end(),
                   [&](int a, int b) { return inst.first_stage[a] < inst.first_stage[b]; });
  for (int i : pool) {
    trace.first.push_back(i);
    trace.repair_added.push_back(i);
    for (auto& y : trace.second) y.erase(std::remove(y.begin(), y.end(), i), y.end());
    if (detail::covers(trace, p)) break;
  }
  std::sort(trace.first.begin(), trace.first.end());
  trace.failed = !detail::covers(trace, p);
  return trace;
}

/// Randomized rounding of the selection relaxation. Coins are drawn from one
/// SplitMix64 stream: k_hat flips per first-stage item of E(L*) in ascending
/// order, then for each scenario in order k_hat flips per item of E^j(L*).
inline RoundingOutcome selection_randomized_rounding(const TwoStageInstance& inst, std::uint64_t seed) {
  const auto lp = selection_lp_budget(inst);
  const int n = inst.n, k = inst.scenario_count(), p = inst.cardinality().p;
  RoundingOutcome out;
  auto& t = out.trace;
  t.seed = seed;
  t.k_hat = selection_k_hat(n, k);
  t.budget = lp.budget;
  SplitMix64 rng(seed);
  auto rounds = [&](double prob) {
    prob = std::clamp(prob, 0.0, 1.0);
    bool head = false;
    for (int r = 0; r < t.k_hat; ++r) head = rng.coin(prob) || head;
    return head;
  };
  std::vector<char> in_x(n, 0);
  for (int i = 0; i < n; ++i)
    if (lp.first_pool[i] && rounds(lp.x[i])) in_x[i] = 1;
  t.second.assign(k, {});
  for (int j = 0; j < k; ++j)
    for (int i = 0; i < n; ++i)
      if (lp.second_pool[j][i] && rounds(lp.y[j][i]) && !in_x[i]) t.second[j].push_back(i);
  for (int i = 0; i < n; ++i)
    if (in_x[i]) {
      t.first.push_back(i);
      t.rounded_cost += inst.first_stage[i];
    }
  for (int j = 0; j < k; ++j)
    for (int i : t.second[j]) t.rounded_cost += inst.probabilities[j] * inst.scenario_costs[j][i];
  t.normalized_cost = t.budget > 0.0 ? t.rounded_cost / t.budget : 0.0;
  t.failed = !detail::covers(t, p);
  auto fixed = t.failed ? selection_repair(inst, t) : t;
  if (fixed.failed) {
    t = std::move(fixed);
    return out;
  }

  // Trim to exactly p items per scenario: X to its p cheapest items when it is
  // already too large, then drop the costliest surplus scenario items.
  std::vector<int> x_items = fixed.first;
  if (static_cast<int>(x_items.size()) > p) {
    std::stable_sort(x_items.begin(), x_items.end(),
                     [&](int a, int b) { return inst.first_stage[a] < inst.first_stage[b]; });
    x_items.resize(p);
  }
  SolveReport report;
  report.objective = Objective::expected();
  report.algorithm = "selection-rr";
  report.seed = seed;
  report.lower_bound = lp.budget;
  report.plan.x = indicator(n, x_items);
  const int need = p - static_cast<int>(x_items.size());
  for (int j = 0; j < k; ++j) {
    auto ys = fixed.second[j];
    const auto& c = inst.scenario_costs[j];
    std::stable_sort(ys.begin(), ys.end(), [&](int a, int b) { return c[a] < c[b]; });
    ys.resize(std::max(0, need));
    report.plan.recourse.push_back(indicator(n, ys));
    report.per_scenario_cost.push_back(scenario_cost(inst, report.plan.recourse.back(), j));
  }
  report.value = evaluate_plan(inst, report.plan, report.objective);
  out.report = std::move(report);
  t = std::move(fixed);
  return out;
}

}  // namespace riskstage
