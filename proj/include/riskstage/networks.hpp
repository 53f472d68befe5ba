#pragma once

// Shortest path, spanning tree and assignment algorithms.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "riskstage/evaluate.hpp"
#include "riskstage/graph.hpp"
#include "riskstage/lp.hpp"
#include "riskstage/model.hpp"
#include "riskstage/random.hpp"

namespace riskstage {

// ---------------------------------------------------------------------------
// Series-parallel shortest path

struct SpNode {
  enum class Kind { leaf, series, parallel };
  Kind kind = Kind::leaf;
  int arc = -1;  // leaves only
  int left = -1;
  int right = -1;
  int tail = -1;
  int head = -1;
};

/// Decomposition tree; children always precede their parent in `nodes`.
struct SpDecomposition {
  std::vector<SpNode> nodes;
  int root = -1;
};

/// Decomposition tree of a two-terminal series-parallel digraph, found by
/// merging parallel arcs and contracting internal nodes of in- and out-degree
/// one until a single source-sink arc is left.
inline SpDecomposition sp_decompose(const Digraph& g) {
  if (g.source == g.sink) throw UnsupportedError("source and sink must differ");
  struct Virtual {
    int tail, head, node;
    bool alive;
  };
  SpDecomposition d;
  std::vector<Virtual> arcs;
  for (std::size_t a = 0; a < g.arcs.size(); ++a) {
    d.nodes.push_back({SpNode::Kind::leaf, static_cast<int>(a), -1, -1, g.arcs[a].first, g.arcs[a].second});
    arcs.push_back({g.arcs[a].first, g.arcs[a].second, static_cast<int>(a), true});
  }
  auto combine = [&](SpNode::Kind kind, int l, int r, int tail, int head) {
    d.nodes.push_back({kind, -1, l, r, tail, head});
    return static_cast<int>(d.nodes.size()) - 1;
  };
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t a = 0; a < arcs.size(); ++a) {
      if (!arcs[a].alive) continue;
      for (std::size_t b = a + 1; b < arcs.size(); ++b) {
        if (!arcs[b].alive || arcs[b].tail != arcs[a].tail || arcs[b].head != arcs[a].head) continue;
        arcs[a].node = combine(SpNode::Kind::parallel, arcs[a].node, arcs[b].node, arcs[a].tail, arcs[a].head);
        arcs[b].alive = false;
        changed = true;
      }
    }
    for (int v = 0; v < g.node_count; ++v) {
      if (v == g.source || v == g.sink) continue;
      int in = -1, out = -1, in_count = 0, out_count = 0;
      for (std::size_t a = 0; a < arcs.size(); ++a) {
        if (!arcs[a].alive) continue;
        if (arcs[a].head == v) in = static_cast<int>(a), ++in_count;
        if (arcs[a].tail == v) out = static_cast<int>(a), ++out_count;
      }
      if (in_count != 1 || out_count != 1 || in == out) continue;
      const int node = combine(SpNode::Kind::series, arcs[in].node, arcs[out].node, arcs[in].tail, arcs[out].head);
      arcs[in].alive = arcs[out].alive = false;
      arcs.push_back({arcs[in].tail, arcs[out].head, node, true});
      changed = true;
    }
  }
  std::vector<const Virtual*> left;
  for (const auto& a : arcs)
    if (a.alive) left.push_back(&a);
  if (left.size() == 1 && left[0]->tail == g.source && left[0]->head == g.sink) {
    d.root = left[0]->node;
    return d;
  }
  std::ostringstream os;
  os << "not series-parallel; irreducible kernel:";
  for (const auto* a : left) os << " (" << a->tail << "," << a->head << ")";
  throw UnsupportedError(os.str());
}

/// Exact expectation optimum on a series-parallel graph with exact-mode paths.
/// Each component keeps its best standalone two-stage cost and, per scenario,
/// its cheapest fully deferred path.
inline SolveReport sp_dp_expectation(const TwoStageInstance& inst) {
  validate(inst);
  if (inst.family != Family::shortest_path) throw UnsupportedError("sp-dp needs a shortest-path instance");
  if (inst.mode != FeasibleMode::exact) throw UnsupportedError("sp-dp supports exact-mode paths only");
  const auto d = sp_decompose(inst.digraph());
  const int k = inst.scenario_count();
  struct Info {
    double mixed = 0.0;
    std::vector<double> defer;
    int choice = 0;  // leaf: 1 buys the arc; parallel: 0 left, 1 right, 2 defer both
  };
  std::vector<Info> info(d.nodes.size());
  for (std::size_t v = 0; v < d.nodes.size(); ++v) {
    const auto& node = d.nodes[v];
    auto& cur = info[v];
    cur.defer.assign(k, 0.0);
    switch (node.kind) {
      case SpNode::Kind::leaf: {
        double expected = 0.0;
        for (int j = 0; j < k; ++j) {
          cur.defer[j] = inst.scenario_costs[j][node.arc];
          expected += inst.probabilities[j] * cur.defer[j];
        }
        cur.choice = inst.first_stage[node.arc] <= expected ? 1 : 0;
        cur.mixed = std::min(inst.first_stage[node.arc], expected);
        break;
      }
      case SpNode::Kind::series:
        cur.mixed = info[node.left].mixed + info[node.right].mixed;
        for (int j = 0; j < k; ++j) cur.defer[j] = info[node.left].defer[j] + info[node.right].defer[j];
        break;
      case SpNode::Kind::parallel: {
        double switching = 0.0;
        for (int j = 0; j < k; ++j) {
          cur.defer[j] = std::min(info[node.left].defer[j], info[node.right].defer[j]);
          switching += inst.probabilities[j] * cur.defer[j];
        }
        cur.mixed = info[node.left].mixed;
        cur.choice = 0;
        if (info[node.right].mixed < cur.mixed) cur.mixed = info[node.right].mixed, cur.choice = 1;
        if (switching < cur.mixed) cur.mixed = switching, cur.choice = 2;
        break;
      }
    }
  }
  Choice x(inst.n, 0);
  std::vector<int> stack{d.root};
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    const auto& node = d.nodes[v];
    if (node.kind == SpNode::Kind::leaf) {
      if (info[v].choice == 1) x[node.arc] = 1;
    } else if (node.kind == SpNode::Kind::series) {
      stack.push_back(node.left);
      stack.push_back(node.right);
    } else if (info[v].choice < 2) {
      stack.push_back(info[v].choice == 0 ? node.left : node.right);
    }
  }
  return make_report(inst, x, Objective::expected(), "sp-dp");
}

// ---------------------------------------------------------------------------
// Connectivity variant on acyclic graphs

/// Two-stage path where the first stage is itself a path from the source to
/// some node v. Every candidate v is scored by its cheapest first-stage prefix
/// plus CVaR_alpha of the cheapest per-scenario suffixes; ties go to the
/// smallest node id.
inline SolveReport connectivity_solve(const TwoStageInstance& inst, double alpha) {
  validate(inst);
  const auto objective = Objective::conditional(alpha);
  if (inst.family != Family::shortest_path) throw UnsupportedError("connectivity needs a shortest-path instance");
  const auto& g = inst.digraph();
  graph::DigraphIndex idx(g);
  if (!idx.topological) throw UnsupportedError("connectivity requires an acyclic graph");
  const int k = inst.scenario_count();
  double best = graph::kInf;
  int best_node = -1;
  graph::PathResult best_prefix;
  std::vector<graph::PathResult> best_suffix;
  for (int v = 0; v < g.node_count; ++v) {
    auto prefix = graph::shortest_path(g, idx, g.source, v, [&](int a) { return inst.first_stage[a]; });
    if (!prefix.reachable()) continue;
    std::vector<graph::PathResult> suffix;
    std::vector<Atom> atoms;
    for (int j = 0; j < k && (suffix.empty() || suffix.back().reachable()); ++j) {
      suffix.push_back(graph::shortest_path(g, idx, v, g.sink, [&](int a) { return inst.scenario_costs[j][a]; }));
      atoms.push_back({suffix.back().cost, inst.probabilities[j]});
    }
    if (!suffix.back().reachable()) continue;
    const double value = prefix.cost + objective.apply(DiscreteDistribution(std::move(atoms)));
    if (value < best) {
      best = value;
      best_node = v;
      best_prefix = std::move(prefix);
      best_suffix = std::move(suffix);
    }
  }
  if (best_node < 0) throw InfeasibleError("sink unreachable from source");
  SolveReport r;
  r.objective = objective;
  r.algorithm = "connectivity";
  r.value = best;
  r.plan.x = indicator(inst.n, best_prefix.arcs);
  for (int j = 0; j < k; ++j) {
    r.plan.recourse.push_back(indicator(inst.n, best_suffix[j].arcs));
    r.per_scenario_cost.push_back(best_suffix[j].cost);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Spanning tree: cut-set relaxation and randomized rounding

enum class MstVariant { robust, expectation };

struct NodeCut {
  int scenario = 0;
  std::vector<int> side;  // sorted, never contains node 0
  friend bool operator<(const NodeCut& a, const NodeCut& b) {
    return std::tie(a.scenario, a.side) < std::tie(b.scenario, b.side);
  }
};

/// Fractional optimum of the budget-filtered cut-set relaxation at the
/// smallest feasible budget.
struct CutSetLpState {
  double budget = 0.0;                           // L*
  std::vector<double> x;                         // x*_e
  std::vector<std::vector<double>> y;            // y*_ej, one row per scenario
  std::vector<char> first_pool;                  // e in E(L*)
  std::vector<std::vector<char>> second_pool;    // e in E^j(L*)
  std::vector<NodeCut> cuts;                     // every generated cut
  int iterations = 0;                            // LP solves spent on cut generation
};

namespace detail {

inline bool mst_first_allowed(const TwoStageInstance& inst, int e, double budget) {
  return inst.first_stage[e] <= budget;
}

inline bool mst_second_allowed(const TwoStageInstance& inst, MstVariant variant, int j, int e, double budget) {
  const double c = inst.scenario_costs[j][e];
  return (variant == MstVariant::robust ? c : inst.probabilities[j] * c) <= budget;
}

inline std::vector<int> canonical_side(std::vector<int> side, int node_count) {
  std::sort(side.begin(), side.end());
  if (!side.empty() && side.front() == 0) {
    std::vector<int> other;
    std::size_t p = 0;
    for (int v = 0; v < node_count; ++v) {
      if (p < side.size() && side[p] == v)
        ++p;
      else
        other.push_back(v);
    }
    return other;
  }
  return side;
}

}  // namespace detail

inline constexpr double kCutViolation = 1e-6;

inline CutSetLpState mst_cutset_lp(const TwoStageInstance& inst, MstVariant variant) {
  validate(inst);
  if (inst.family != Family::spanning_tree) throw UnsupportedError("cut-set relaxation needs a spanning-tree instance");
  const auto& g = inst.graph();
  const int m = inst.n, k = inst.scenario_count(), nodes = g.node_count;
  if (!graph::is_connected(nodes, g.edges, Choice(m, 1))) throw InfeasibleError("graph is disconnected");
  auto y_var = [&](int j, int e) { return m + j * m + e; };

  std::set<NodeCut> pool;
  if (nodes > 1)
    for (int j = 0; j < k; ++j) pool.insert({j, detail::canonical_side({0}, nodes)});
  const long cap = 10L * std::max(1, m) * k;
  int iterations = 0;

  auto build = [&](double budget) {
    LpProblem lp;
    for (int e = 0; e < m; ++e) lp.add_variable(0.0, detail::mst_first_allowed(inst, e, budget) ? 1.0 : 0.0);
    for (int j = 0; j < k; ++j)
      for (int e = 0; e < m; ++e)
        lp.add_variable(0.0, detail::mst_second_allowed(inst, variant, j, e, budget) ? 1.0 : 0.0);
    if (variant == MstVariant::robust) {
      for (int j = 0; j < k; ++j) {
        std::vector<std::pair<int, double>> row;
        for (int e = 0; e < m; ++e) {
          row.push_back({e, inst.first_stage[e]});
          row.push_back({y_var(j, e), inst.scenario_costs[j][e]});
        }
        lp.add_row(std::move(row), Relation::le, budget);
      }
    } else {
      std::vector<std::pair<int, double>> row;
      for (int e = 0; e < m; ++e) row.push_back({e, inst.first_stage[e]});
      for (int j = 0; j < k; ++j)
        for (int e = 0; e < m; ++e) row.push_back({y_var(j, e), inst.probabilities[j] * inst.scenario_costs[j][e]});
      lp.add_row(std::move(row), Relation::le, budget);
    }
    for (const auto& cut : pool) {
      std::vector<char> in_side(nodes, 0);
      for (int v : cut.side) in_side[v] = 1;
      std::vector<std::pair<int, double>> row;
      for (int e = 0; e < m; ++e)
        if (in_side[g.edges[e].first] != in_side[g.edges[e].second]) {
          row.push_back({e, 1.0});
          row.push_back({y_var(cut.scenario, e), 1.0});
        }
      lp.add_row(std::move(row), Relation::ge, 1.0);
    }
    return lp;
  };

  // Solve, separate every scenario with Stoer-Wagner, repeat until no cut of
  // weight below one remains.
  auto probe = [&](double budget) {
    for (long round = 0;; ++round) {
      if (round > cap) throw GuardError("cut generation exceeded its iteration cap");
      ++iterations;
      auto outcome = lp_solve(build(budget));
      if (!outcome.feasible()) return outcome;
      bool added = false;
      for (int j = 0; j < k; ++j) {
        std::vector<std::vector<double>> w(nodes, std::vector<double>(nodes, 0.0));
        for (int e = 0; e < m; ++e) {
          const double val = outcome.values[e] + outcome.values[y_var(j, e)];
          w[g.edges[e].first][g.edges[e].second] += val;
          w[g.edges[e].second][g.edges[e].first] += val;
        }
        graph::stoer_wagner(std::move(w), [&](const graph::Cut& c) {
          if (c.value < 1.0 - kCutViolation)
            added = pool.insert({j, detail::canonical_side(c.side, nodes)}).second || added;
        });
      }
      if (!added) return outcome;
    }
  };

  double hi = 0.0;
  for (int e = 0; e < m; ++e) hi += inst.first_stage[e];
  double second = 0.0;
  for (int j = 0; j < k; ++j) {
    double row = 0.0;
    for (int e = 0; e < m; ++e) row += inst.scenario_costs[j][e];
    second = variant == MstVariant::robust ? std::max(second, row) : second + inst.probabilities[j] * row;
  }
  hi += second;
  const auto found = min_feasible_budget_probe(probe, 0.0, hi);

  CutSetLpState out;
  out.budget = found.budget;
  out.iterations = iterations;
  out.cuts.assign(pool.begin(), pool.end());
  const auto& v = found.witness.values;
  out.x.assign(v.begin(), v.begin() + m);
  out.y.assign(k, std::vector<double>(m));
  out.first_pool.assign(m, 0);
  out.second_pool.assign(k, std::vector<char>(m, 0));
  for (int e = 0; e < m; ++e) out.first_pool[e] = detail::mst_first_allowed(inst, e, out.budget);
  for (int j = 0; j < k; ++j)
    for (int e = 0; e < m; ++e) {
      out.y[j][e] = v[y_var(j, e)];
      out.second_pool[j][e] = detail::mst_second_allowed(inst, variant, j, e, out.budget);
    }
  return out;
}

/// ceil(40 ln n + 16 ln K) for a graph on n nodes.
inline int mst_k_hat(int nodes, int k) {
  return static_cast<int>(std::ceil(40.0 * std::log(static_cast<double>(nodes)) + 16.0 * std::log(static_cast<double>(k))));
}

/// Normalized cost bound k + (e - 1) sqrt(k ln(arg)); the robust variant uses
/// arg = 2 (nK)^2 per scenario, the expectation variant arg = 2 K n^2.
inline double mst_cost_envelope(int k_hat, int nodes, int k, MstVariant variant) {
  const double kh = k_hat, n = nodes, kk = k;
  const double arg = variant == MstVariant::robust ? 2.0 * (n * kk) * (n * kk) : 2.0 * kk * n * n;
  return kh + (std::exp(1.0) - 1.0) * std::sqrt(kh * std::log(arg));
}

struct MstRoundingTrace {
  std::uint64_t seed = 0;
  int k_hat = 0;
  double budget = 0.0;                      // L*, unscaled
  std::vector<int> first;                   // F
  std::vector<std::vector<int>> second;     // F^j
  bool failed = false;
  std::vector<std::pair<int, int>> repair_added;  // (edge, scenario), scenario -1 for the first stage
  /// Rounded cost before repair and pruning: per scenario C(F) + c_j(F^j) for
  /// the robust variant, a single entry C(F) + sum_j p_j c_j(F^j) otherwise.
  std::vector<double> rounded_cost;
  std::vector<double> normalized_cost;      // rounded_cost / L* (0 when L* = 0)
};

struct MstRoundingOutcome {
  std::optional<SolveReport> report;
  MstRoundingTrace trace;
};

namespace detail {

inline bool scenario_connected(const UndirectedGraph& g, const std::vector<int>& first, const std::vector<int>& second) {
  graph::UnionFind uf(g.node_count);
  for (int e : first) uf.unite(g.edges[e].first, g.edges[e].second);
  for (int e : second) uf.unite(g.edges[e].first, g.edges[e].second);
  return uf.components() <= 1;
}

}  // namespace detail

/// Randomized rounding of the cut-set relaxation. Coins come from one
/// SplitMix64 stream: k_hat flips per edge of E(L*) in ascending order, then
/// for each scenario in order k_hat flips per edge of E^j(L*). Disconnected
/// scenarios are repaired greedily; a successful rounding is pruned to an
/// acyclic first stage and one spanning tree per scenario.
inline MstRoundingOutcome mst_randomized_rounding(const TwoStageInstance& inst, std::uint64_t seed,
                                                  MstVariant variant) {
  const auto lp = mst_cutset_lp(inst, variant);
  const auto& g = inst.graph();
  const int m = inst.n, k = inst.scenario_count();
  MstRoundingOutcome out;
  auto& t = out.trace;
  t.seed = seed;
  t.k_hat = mst_k_hat(g.node_count, k);
  t.budget = lp.budget;
  SplitMix64 rng(seed);
  auto rounds = [&](double prob) {
    prob = std::clamp(prob, 0.0, 1.0);
    bool head = false;
    for (int r = 0; r < t.k_hat; ++r) head = rng.coin(prob) || head;
    return head;
  };
  for (int e = 0; e < m; ++e)
    if (lp.first_pool[e] && rounds(lp.x[e])) t.first.push_back(e);
  t.second.assign(k, {});
  for (int j = 0; j < k; ++j)
    for (int e = 0; e < m; ++e)
      if (lp.second_pool[j][e] && rounds(lp.y[j][e])) t.second[j].push_back(e);

  double first_cost = 0.0;
  for (int e : t.first) first_cost += inst.first_stage[e];
  std::vector<double> scen(k, 0.0);
  for (int j = 0; j < k; ++j)
    for (int e : t.second[j]) scen[j] += inst.scenario_costs[j][e];
  if (variant == MstVariant::robust) {
    for (int j = 0; j < k; ++j) t.rounded_cost.push_back(first_cost + scen[j]);
  } else {
    double total = first_cost;
    for (int j = 0; j < k; ++j) total += inst.probabilities[j] * scen[j];
    t.rounded_cost.push_back(total);
  }
  for (double c : t.rounded_cost) t.normalized_cost.push_back(t.budget > 0.0 ? c / t.budget : 0.0);

  for (int j = 0; j < k; ++j)
    if (!detail::scenario_connected(g, t.first, t.second[j])) t.failed = true;

  if (t.failed) {
    // Repair pool: edges of any filter set that no coin selected.
    std::vector<char> used(m, 0);
    for (int e : t.first) used[e] = 1;
    for (const auto& s : t.second)
      for (int e : s) used[e] = 1;
    std::vector<char> in_pool(m, 0);
    for (int e = 0; e < m; ++e) {
      bool filtered = lp.first_pool[e];
      for (int j = 0; j < k; ++j) filtered = filtered || lp.second_pool[j][e];
      in_pool[e] = filtered && !used[e];
    }
    for (;;) {
      int j = 0;
      while (j < k && detail::scenario_connected(g, t.first, t.second[j])) ++j;
      if (j == k) break;
      graph::UnionFind uf(g.node_count);
      for (int e : t.first) uf.unite(g.edges[e].first, g.edges[e].second);
      for (int e : t.second[j]) uf.unite(g.edges[e].first, g.edges[e].second);
      int pick = -1, target = 0;
      double cost = graph::kInf;
      for (int e = 0; e < m; ++e) {
        if (!in_pool[e] || uf.find(g.edges[e].first) == uf.find(g.edges[e].second)) continue;
        if (lp.first_pool[e] && inst.first_stage[e] < cost) cost = inst.first_stage[e], pick = e, target = -1;
        if (lp.second_pool[j][e] && inst.scenario_costs[j][e] < cost) cost = inst.scenario_costs[j][e], pick = e, target = j;
      }
      if (pick < 0) return out;  // pool exhausted, failure stands
      if (target < 0) {
        t.first.push_back(pick);
        std::sort(t.first.begin(), t.first.end());
        in_pool[pick] = 0;
      } else {
        t.second[j].push_back(pick);
        std::sort(t.second[j].begin(), t.second[j].end());
      }
      t.repair_added.push_back({pick, target});
    }
    t.failed = false;
  }

  // Acyclic first stage: Kruskal over F by first-stage cost. Each scenario
  // then keeps the cheapest edges of F^j that join components of the forest.
  std::vector<int> order = t.first;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return inst.first_stage[a] < inst.first_stage[b]; });
  graph::UnionFind forest(g.node_count);
  Choice x(m, 0);
  for (int e : order)
    if (forest.unite(g.edges[e].first, g.edges[e].second)) x[e] = 1;
  SolveReport r;
  r.objective = variant == MstVariant::robust ? Objective::robust() : Objective::expected();
  r.algorithm = variant == MstVariant::robust ? "mst-rr-robust" : "mst-rr-expectation";
  r.seed = seed;
  r.lower_bound = lp.budget;
  r.plan.x = x;
  for (int j = 0; j < k; ++j) {
    auto uf = forest;
    auto cand = t.second[j];
    cand.erase(std::remove_if(cand.begin(), cand.end(), [&](int e) { return x[e] != 0; }), cand.end());
    std::stable_sort(cand.begin(), cand.end(),
                     [&](int a, int b) { return inst.scenario_costs[j][a] < inst.scenario_costs[j][b]; });
    Choice y(m, 0);
    for (int e : cand)
      if (uf.unite(g.edges[e].first, g.edges[e].second)) y[e] = 1;
    r.plan.recourse.push_back(std::move(y));
    r.per_scenario_cost.push_back(scenario_cost(inst, r.plan.recourse.back(), j));
  }
  r.value = evaluate_plan(inst, r.plan, r.objective);
  out.report = std::move(r);
  return out;
}

// ---------------------------------------------------------------------------
// Path to assignment

/// Bipartite image of a shortest-path instance. Left nodes are the source
/// followed by the internal nodes, right nodes are the sink followed by copies
/// of the internal nodes. Arc (u,v) becomes edge {u, v'}; arcs entering the
/// source or leaving the sink are dropped. Each internal node i gets a dummy
/// edge {i, i'} with first-stage cost |A| * c_max and second-stage cost 0.
/// Optima are preserved on acyclic graphs.
inline TwoStageInstance sp_to_assignment(const TwoStageInstance& inst) {
  validate(inst);
  if (inst.family != Family::shortest_path) throw UnsupportedError("sp_to_assignment needs a shortest-path instance");
  const auto& g = inst.digraph();
  const int k = inst.scenario_count();
  std::vector<int> internal_pos(g.node_count, -1);
  int internal = 0;
  for (int v = 0; v < g.node_count; ++v)
    if (v != g.source && v != g.sink) internal_pos[v] = internal++;
  auto left_of = [&](int v) { return v == g.source ? 0 : internal_pos[v] + 1; };
  auto right_of = [&](int v) { return v == g.sink ? 0 : internal_pos[v] + 1; };

  double c_max = 0.0;
  for (double c : inst.first_stage) c_max = std::max(c_max, c);
  for (const auto& row : inst.scenario_costs)
    for (double c : row) c_max = std::max(c_max, c);
  const double big = static_cast<double>(g.arcs.size()) * c_max;

  TwoStageInstance out;
  out.family = Family::assignment;
  out.mode = inst.mode;
  out.probabilities = inst.probabilities;
  out.alpha = inst.alpha;
  out.scenario_costs.assign(k, {});
  Bipartite b;
  b.left_count = b.right_count = internal + 1;
  for (std::size_t a = 0; a < g.arcs.size(); ++a) {
    const auto [u, v] = g.arcs[a];
    if (v == g.source || u == g.sink) continue;
    b.edges.push_back({left_of(u), right_of(v)});
    out.first_stage.push_back(inst.first_stage[a]);
    for (int j = 0; j < k; ++j) out.scenario_costs[j].push_back(inst.scenario_costs[j][a]);
  }
  for (int v = 0; v < g.node_count; ++v) {
    if (internal_pos[v] < 0) continue;
    b.edges.push_back({left_of(v), right_of(v)});
    out.first_stage.push_back(big);
    for (int j = 0; j < k; ++j) out.scenario_costs[j].push_back(0.0);
  }
  out.n = static_cast<int>(b.edges.size());
  out.structure = b;
  return out;
}

}  // namespace riskstage
