#pragma once

// Exhaustive two-stage optima. These are the reference values every other
// algorithm is checked against, so guards fail loudly instead of sampling.

#include <algorithm>
#include <cstdint>
#include <memory>
#include <optional>
#include <unordered_set>
#include <vector>

#include "riskstage/evaluate.hpp"
#include "riskstage/feasible.hpp"
#include "riskstage/graph.hpp"

namespace riskstage {

inline constexpr std::size_t kCandidateGuard = std::size_t{1} << 24;

struct BruteForceOptions {
  /// Only first stages with C x <= cap are searched. Any x whose objective is
  /// at most the cap satisfies this, so the result decides "OPT <= cap"
  /// exactly even when the unrestricted space is out of reach.
  std::optional<double> first_stage_cap;
  /// Superset mode: search all subsets of the n elements instead of subsets of
  /// the union of member supports.
  bool full_superset_space = false;
};

namespace detail {

inline bool mask_lex_less(std::uint64_t a, std::uint64_t b) {
  const std::uint64_t diff = a ^ b;
  if (diff == 0) return false;
  const std::uint64_t low = diff & (~diff + 1);
  return (a & low) == 0;
}

inline void mask_to_choice(std::uint64_t mask, Choice& x) {
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = static_cast<std::uint8_t>((mask >> i) & 1U);
}

inline std::uint64_t member_mask(const std::vector<int>& member) {
  std::uint64_t m = 0;
  for (int i : member) m |= std::uint64_t{1} << i;
  return m;
}

/// Candidate first stages for the brute force, as masks over element ids.
inline std::vector<std::uint64_t> first_stage_candidates(const TwoStageInstance& inst, const FeasibleCatalog& cat,
                                                         const BruteForceOptions& opt) {
  const double cap = opt.first_stage_cap.value_or(graph::kInf);
  const double slack = 1e-9 * std::max(1.0, std::abs(cap));
  const std::size_t limit = guard_limit(kCandidateGuard);
  auto cost_of = [&](std::uint64_t mask) {
    double sum = 0.0;
    for (int i = 0; i < inst.n; ++i)
      if ((mask >> i) & 1U) sum += inst.first_stage[i];
    return sum;
  };
  std::vector<std::uint64_t> out;
  const bool subsets_of_members = inst.mode == FeasibleMode::exact || inst.family == Family::spanning_tree;
  if (subsets_of_members) {
    std::unordered_set<std::uint64_t> seen;
    std::size_t visited = 0;
    for (const auto& member : cat.members) {
      std::uint64_t full = 0;
      for (int i : member)
        if (inst.first_stage[i] <= cap + slack) full |= std::uint64_t{1} << i;
      for (std::uint64_t sub = full;; sub = (sub - 1) & full) {
        if (++visited > 8 * limit) throw GuardError("brute force candidate enumeration exceeded its guard");
        if (cost_of(sub) <= cap + slack && seen.insert(sub).second && seen.size() > limit)
          throw GuardError("brute force candidate set exceeded its guard");
        if (sub == 0) break;
      }
    }
    out.assign(seen.begin(), seen.end());
    std::sort(out.begin(), out.end());
  } else {
    std::uint64_t universe = 0;
    if (opt.full_superset_space) {
      universe = inst.n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << inst.n) - 1;
    } else {
      for (const auto& member : cat.members) universe |= member_mask(member);
    }
    std::vector<int> elems;
    for (int i = 0; i < inst.n; ++i)
      if (((universe >> i) & 1U) && inst.first_stage[i] <= cap + slack) elems.push_back(i);
    if (elems.size() >= 63 || (std::size_t{1} << elems.size()) > limit)
      throw GuardError("brute force superset space has " + std::to_string(elems.size()) +
                       " free elements, above the guard");
    // Depth-first over the free elements, cutting branches above the cap.
    auto rec = [&](auto&& self, std::size_t k, std::uint64_t mask, double cost) -> void {
      if (k == elems.size()) {
        out.push_back(mask);
        return;
      }
      self(self, k + 1, mask, cost);
      const double with = cost + inst.first_stage[elems[k]];
      if (with <= cap + slack) self(self, k + 1, mask | (std::uint64_t{1} << elems[k]), with);
    };
    rec(rec, 0, 0, 0.0);
  }
  return out;
}

}  // namespace detail

namespace detail {

/// Exhaustive search that only admits values <= bound; empty when the optimum
/// exceeds it.
inline std::optional<SolveReport> brute_force_search(const TwoStageInstance& inst, const Objective& objective,
                                                     const BruteForceOptions& opt, double bound) {
  validate(inst);
  if (inst.n > 64) throw GuardError("brute force supports at most 64 elements");
  auto catalog = std::make_shared<FeasibleCatalog>(enumerate_feasible(inst));
  if (catalog->members.empty()) throw InfeasibleError("the feasible set is empty");
  RecourseSolver solver(inst, catalog);
  const auto candidates = first_stage_candidates(inst, *catalog, opt);

  const int k = inst.scenario_count();
  Choice x(inst.n, 0);
  std::vector<Atom> atoms(k);
  double best = bound;
  std::optional<std::uint64_t> best_mask;
  for (std::uint64_t mask : candidates) {
    mask_to_choice(mask, x);
    const double first = first_stage_cost(inst, x);
    const double tol = 1e-12 * std::max(1.0, std::abs(best));
    if (first > best + tol) continue;
    if (!solver.completable(x)) continue;
    // Lower bound from the scenarios evaluated so far: every objective is at
    // least the probability-weighted partial sum, and the robust one at least
    // the partial maximum.
    double partial = 0.0;
    bool pruned = false;
    for (int j = 0; j < k; ++j) {
      const bool robust = objective.kind == Objective::Kind::robust;
      const double room = best + tol - first - (robust ? 0.0 : partial);
      const double rc = solver.cost(x, j, robust ? room : room / inst.probabilities[j]);
      atoms[j] = {rc, inst.probabilities[j]};
      partial = robust ? std::max(partial, rc) : partial + inst.probabilities[j] * rc;
      if (first + partial > best + tol) {
        pruned = true;
        break;
      }
    }
    if (pruned) continue;
    const double value = first + objective.apply(DiscreteDistribution(atoms));
    if (value > best + tol) continue;
    if (!best_mask || value < best - tol || (value <= best + tol && detail::mask_lex_less(mask, *best_mask))) {
      best = best_mask ? std::min(best, value) : value;
      best_mask = mask;
    }
  }
  if (!best_mask) return std::nullopt;
  mask_to_choice(*best_mask, x);
  return make_report(solver, x, objective, "brute");
}

}  // namespace detail

/// Global optimum of min_{x in X'} C x + F[Y^x] by enumerating every candidate
/// first stage. Exact mode searches all subsets of members of X; superset mode
/// searches subsets of the union of member supports, since an element on no
/// member never lowers any recourse. Ties go to the lexicographically smallest
/// x. Requires n <= 64.
inline SolveReport brute_force_optimum(const TwoStageInstance& inst, const Objective& objective,
                                       const BruteForceOptions& opt = {}) {
  auto r = detail::brute_force_search(inst, objective, opt, graph::kInf);
  if (!r) throw InfeasibleError("no completable first stage found");
  return *r;
}

/// Decides OPT <= bound exhaustively. Returns the optimal report when it holds
/// and nothing otherwise; only first stages with C x <= bound are visited.
inline std::optional<SolveReport> brute_force_decide(const TwoStageInstance& inst, const Objective& objective,
                                                     double bound) {
  BruteForceOptions opt;
  opt.first_stage_cap = bound;
  return detail::brute_force_search(inst, objective, opt, bound + 1e-9 * std::max(1.0, std::abs(bound)));
}

/// Exhaustive optimum of the connectivity variant: the first stage must be a
/// path from the source to some node (possibly empty), and each scenario
/// completes it to a source-sink path.
inline SolveReport brute_force_connectivity(TwoStageInstance inst, const Objective& objective) {
  validate(inst);
  if (inst.family != Family::shortest_path) throw UnsupportedError("connectivity needs a shortest-path instance");
  inst.mode = FeasibleMode::exact;
  const auto& g = inst.digraph();
  graph::DigraphIndex idx(g);
  RecourseSolver solver(inst);
  const std::size_t limit = guard_limit(kCatalogGuard);
  double best = graph::kInf;
  std::optional<Choice> best_x;
  for (int v = 0; v < g.node_count; ++v) {
    std::vector<std::vector<int>> prefixes =
        v == g.source ? std::vector<std::vector<int>>{{}} : graph::simple_paths(g, idx, g.source, v, limit);
    for (const auto& prefix : prefixes) {
      Choice x = indicator(inst.n, prefix);
      if (!solver.completable(x)) continue;
      const double value = evaluate_first_stage(solver, x, objective);
      const double tol = 1e-12 * std::max(1.0, std::abs(best));
      if (!best_x || value < best - tol || (value <= best + tol && x < *best_x)) {
        best = best_x ? std::min(best, value) : value;
        best_x = x;
      }
    }
  }
  if (!best_x) throw InfeasibleError("sink unreachable from source");
  return make_report(solver, *best_x, objective, "brute-connectivity");
}

}  // namespace riskstage
