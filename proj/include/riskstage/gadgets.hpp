#pragma once

// Reduction gadgets and seeded random instances.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <string>
#include <vector>

#include "riskstage/errors.hpp"
#include "riskstage/feasible.hpp"
#include "riskstage/graph.hpp"
#include "riskstage/model.hpp"
#include "riskstage/random.hpp"

namespace riskstage {

/// Universe {0..universe-1} and a family of subsets covering it.
struct SetCoverInput {
  int universe = 0;
  std::vector<std::vector<int>> sets;
};

/// Literals are +v for x_v and -v for its negation, variables numbered from 1.
struct CnfInput {
  int variables = 0;
  std::vector<std::vector<int>> clauses;
};

inline void validate(const SetCoverInput& sc) {
  if (sc.universe < 1) throw ValidationError("set cover universe must be nonempty");
  std::vector<char> covered(sc.universe, 0);
  for (const auto& s : sc.sets)
    for (int u : s) {
      if (u < 0 || u >= sc.universe) throw ValidationError("set element outside the universe");
      covered[u] = 1;
    }
  for (int u = 0; u < sc.universe; ++u)
    if (!covered[u]) throw ValidationError("element " + std::to_string(u) + " belongs to no set");
}

inline void validate(const CnfInput& f) {
  if (f.variables < 1) throw ValidationError("formula needs at least one variable");
  if (f.clauses.empty()) throw ValidationError("formula needs at least one clause");
  for (const auto& c : f.clauses) {
    if (c.empty()) throw ValidationError("empty clause");
    for (int lit : c)
      if (lit == 0 || std::abs(lit) > f.variables) throw ValidationError("literal refers to an unknown variable");
  }
}

namespace detail {

inline std::vector<double> uniform_probabilities(int k) { return std::vector<double>(k, 1.0 / k); }

inline bool contains(const std::vector<int>& set, int u) { return std::find(set.begin(), set.end(), u) != set.end(); }

}  // namespace detail

/// Robust RS instance whose optimum is (m+1) M + (minimum cover size), with
/// M = universe + 1. Tools 0..m-1 stand for the sets and cost M now; tool m
/// costs 2M now and 2M later. Scenario u prices set tools at 0 when the set
/// holds u and M otherwise; a last scenario prices set tools at M+1 and tool m
/// at M.
inline TwoStageInstance gen_rs_setcover(const SetCoverInput& sc) {
  validate(sc);
  const int m = static_cast<int>(sc.sets.size());
  const double big = sc.universe + 1.0;
  TwoStageInstance inst;
  inst.family = Family::rs;
  inst.mode = FeasibleMode::exact;
  inst.n = m + 1;
  inst.first_stage.assign(m, big);
  inst.first_stage.push_back(2 * big);
  for (int u = 0; u < sc.universe; ++u) {
    std::vector<double> row;
    for (int i = 0; i < m; ++i) row.push_back(detail::contains(sc.sets[i], u) ? 0.0 : big);
    row.push_back(2 * big);
    inst.scenario_costs.push_back(std::move(row));
  }
  std::vector<double> last(m, big + 1);
  last.push_back(big);
  inst.scenario_costs.push_back(std::move(last));
  inst.probabilities = detail::uniform_probabilities(sc.universe + 1);
  RsPartition part;
  for (int i = 0; i <= m; ++i) part.groups.push_back({i});
  inst.structure = part;
  return inst;
}

/// Superset-mode parallel bundle of two-arc paths s -> mid_j -> t, one per
/// set; its optimum equals the minimum cover size. Arc 2j is a_j (first stage
/// 1), arc 2j+1 is a'_j (first stage m+1). Scenario u prices a_j at m+1 and
/// a'_j at 0 when set j holds u, m+1 otherwise.
inline TwoStageInstance gen_sp_setcover(const SetCoverInput& sc) {
  validate(sc);
  const int m = static_cast<int>(sc.sets.size());
  const double big = m + 1.0;
  TwoStageInstance inst;
  inst.family = Family::shortest_path;
  inst.mode = FeasibleMode::superset;
  Digraph g;
  g.node_count = m + 2;
  g.source = 0;
  g.sink = 1;
  for (int j = 0; j < m; ++j) {
    g.arcs.push_back({0, 2 + j});
    g.arcs.push_back({2 + j, 1});
    inst.first_stage.push_back(1.0);
    inst.first_stage.push_back(big);
  }
  for (int u = 0; u < sc.universe; ++u) {
    std::vector<double> row;
    for (int j = 0; j < m; ++j) {
      row.push_back(big);
      row.push_back(detail::contains(sc.sets[j], u) ? 0.0 : big);
    }
    inst.scenario_costs.push_back(std::move(row));
  }
  inst.n = 2 * m;
  inst.probabilities = detail::uniform_probabilities(sc.universe);
  inst.structure = g;
  return inst;
}

/// Exact-mode doubled network whose optimum is 0 iff `g` has a Hamiltonian
/// path from `first` to `last`. Node v becomes 2v and its copy v' becomes
/// 2v+1. Arcs: forward (v, v') for every v, then backward (v', w) for v != w,
/// both by ascending v then w. Scenario 1 frees the chain first, the remaining
/// nodes ascending, last; scenario 2 frees (v', w) for every arc (v, w) of g.
/// The path runs from `first` to the copy of `last`.
inline TwoStageInstance gen_sp_hamiltonian(const Digraph& g, int first, int last) {
  const int nodes = g.node_count;
  if (nodes < 1) throw ValidationError("graph needs at least one node");
  if (first < 0 || first >= nodes || last < 0 || last >= nodes) throw ValidationError("endpoint outside the graph");
  if (first == last && nodes > 1) throw ValidationError("endpoints must differ");
  std::vector<std::vector<char>> adj(nodes, std::vector<char>(nodes, 0));
  for (const auto& [u, v] : g.arcs) {
    if (u < 0 || u >= nodes || v < 0 || v >= nodes || u == v) throw ValidationError("arc outside the graph or loop");
    adj[u][v] = 1;
  }
  std::vector<int> chain{first};
  for (int v = 0; v < nodes; ++v)
    if (v != first && v != last) chain.push_back(v);
  if (last != first) chain.push_back(last);
  std::vector<int> next(nodes, -1);
  for (std::size_t k = 0; k + 1 < chain.size(); ++k) next[chain[k]] = chain[k + 1];

  TwoStageInstance inst;
  inst.family = Family::shortest_path;
  inst.mode = FeasibleMode::exact;
  Digraph out;
  out.node_count = 2 * nodes;
  out.source = 2 * first;
  out.sink = 2 * last + 1;
  std::vector<double> s1, s2;
  for (int v = 0; v < nodes; ++v) {
    out.arcs.push_back({2 * v, 2 * v + 1});
    inst.first_stage.push_back(0.0);
    s1.push_back(1.0);
    s2.push_back(1.0);
  }
  for (int v = 0; v < nodes; ++v)
    for (int w = 0; w < nodes; ++w) {
      if (v == w) continue;
      out.arcs.push_back({2 * v + 1, 2 * w});
      inst.first_stage.push_back(1.0);
      s1.push_back(next[v] == w ? 0.0 : 1.0);
      s2.push_back(adj[v][w] ? 0.0 : 1.0);
    }
  inst.n = static_cast<int>(out.arcs.size());
  inst.scenario_costs = {s1, s2};
  inst.probabilities = {0.5, 0.5};
  inst.structure = out;
  return inst;
}

/// Superset-mode network whose optimum is at most (variables * clauses) iff
/// the formula is satisfiable. Each variable owns two chains (true side a,
/// false side b) of clause arcs with first-stage cost 1 joined by dashed
/// arcs; components run in series from s to t. Each clause j adds nodes
/// v_ja, v_jb and, per literal, arcs v_ja -> (chain arc of that literal) ->
/// v_jb; the clause nodes are chained from s to t. All other arcs cost
/// M = 2nm + 2 now. Scenario 1 frees the dashed arcs, scenario 2 the clause
/// arcs.
inline TwoStageInstance gen_sp_sat(const CnfInput& f) {
  validate(f);
  const int n = f.variables;
  const int m = static_cast<int>(f.clauses.size());
  const double big = 2.0 * n * m + 2.0;
  enum Kind { chain_arc, dashed, clause_arc };
  Digraph g;
  std::vector<Kind> kinds;
  int next_node = 0;
  auto node = [&]() { return next_node++; };
  std::vector<int> junction(n + 1);
  for (int i = 0; i <= n; ++i) junction[i] = node();
  // p[i][side][j], q[i][side][j]: tail and head of the chain arc.
  std::vector<std::vector<std::vector<int>>> p(n, std::vector<std::vector<int>>(2, std::vector<int>(m)));
  auto q = p;
  for (int i = 0; i < n; ++i)
    for (int side = 0; side < 2; ++side)
      for (int j = 0; j < m; ++j) {
        p[i][side][j] = node();
        q[i][side][j] = node();
      }
  std::vector<int> va(m), vb(m);
  for (int j = 0; j < m; ++j) {
    va[j] = node();
    vb[j] = node();
  }
  auto arc = [&](int u, int v, Kind k) {
    g.arcs.push_back({u, v});
    kinds.push_back(k);
  };
  for (int i = 0; i < n; ++i)
    for (int side = 0; side < 2; ++side) {
      arc(junction[i], p[i][side][0], dashed);
      for (int j = 0; j < m; ++j) {
        arc(p[i][side][j], q[i][side][j], chain_arc);
        arc(q[i][side][j], j + 1 < m ? p[i][side][j + 1] : junction[i + 1], dashed);
      }
    }
  const int s = junction[0], t = junction[n];
  arc(s, va[0], clause_arc);
  for (int j = 0; j < m; ++j) {
    for (int lit : f.clauses[j]) {
      const int i = std::abs(lit) - 1;
      const int side = lit > 0 ? 0 : 1;
      arc(va[j], p[i][side][j], clause_arc);
      arc(q[i][side][j], vb[j], clause_arc);
    }
    arc(vb[j], j + 1 < m ? va[j + 1] : t, clause_arc);
  }
  g.node_count = next_node;
  g.source = s;
  g.sink = t;

  TwoStageInstance inst;
  inst.family = Family::shortest_path;
  inst.mode = FeasibleMode::superset;
  inst.n = static_cast<int>(g.arcs.size());
  std::vector<double> s1, s2;
  for (Kind k : kinds) {
    inst.first_stage.push_back(k == chain_arc ? 1.0 : big);
    s1.push_back(k == dashed ? 0.0 : big);
    s2.push_back(k == clause_arc ? 0.0 : big);
  }
  inst.scenario_costs = {s1, s2};
  inst.probabilities = {0.5, 0.5};
  inst.structure = g;
  return inst;
}

/// Path graph with one arc (or edge) per tool of a singleton-group RS
/// instance, carrying that tool's costs. The target family is shortest-path
/// (exact mode) or spanning-tree.
inline TwoStageInstance gen_chain(const TwoStageInstance& rs, Family target = Family::shortest_path) {
  validate(rs);
  if (rs.family != Family::rs) throw UnsupportedError("gen_chain needs an rs instance");
  for (const auto& group : rs.groups().groups)
    if (group.size() != 1) throw UnsupportedError("gen_chain needs singleton groups; normalize first");
  TwoStageInstance out = rs;
  out.family = target;
  std::vector<Edge> links;
  for (int i = 0; i < rs.n; ++i) links.push_back({i, i + 1});
  if (target == Family::shortest_path) {
    out.mode = FeasibleMode::exact;
    out.structure = Digraph{rs.n + 1, links, 0, rs.n};
  } else if (target == Family::spanning_tree) {
    out.mode = FeasibleMode::superset;
    out.structure = UndirectedGraph{rs.n + 1, links};
  } else {
    throw UnsupportedError("gen_chain renders shortest-path or spanning-tree instances");
  }
  return out;
}

/// Parameters of a random instance. `size` is the element count for rs and
/// selection, the node count for shortest-path and spanning-tree, and the
/// side size for assignment.
struct RandomSpec {
  Family family = Family::selection;
  int size = 6;
  int scenarios = 2;
  std::uint64_t seed = 0;
  int cost_lo = 0;
  int cost_hi = 10;
  FeasibleMode mode = FeasibleMode::exact;
  int p = 0;               // selection: 0 draws p uniformly from [1, size]
  int groups = 0;          // rs: 0 draws the group count uniformly from [1, size]
  double density = 0.4;    // extra arc/edge probability for graph families
  bool acyclic = true;     // shortest-path: arcs only go from lower to higher ids
  bool series_parallel = false;  // shortest-path: grow by series/parallel steps
  int arcs = 0;            // series-parallel arc count, 0 draws from [1, 12]
};

namespace detail {

inline void random_costs(TwoStageInstance& inst, const RandomSpec& spec, SplitMix64& rng) {
  if (spec.cost_lo < 0 || spec.cost_hi < spec.cost_lo) throw ValidationError("cost range must satisfy 0 <= lo <= hi");
  auto draw = [&]() { return static_cast<double>(rng.uniform_int(spec.cost_lo, spec.cost_hi)); };
  inst.first_stage.clear();
  for (int i = 0; i < inst.n; ++i) inst.first_stage.push_back(draw());
  inst.scenario_costs.assign(spec.scenarios, std::vector<double>(inst.n));
  for (auto& row : inst.scenario_costs)
    for (auto& c : row) c = draw();
  std::vector<double> w(spec.scenarios);
  double total = 0.0;
  for (auto& x : w) total += (x = static_cast<double>(rng.uniform_int(1, 10)));
  inst.probabilities.clear();
  for (double x : w) inst.probabilities.push_back(x / total);
}

inline bool random_structure(TwoStageInstance& inst, const RandomSpec& spec, SplitMix64& rng) {
  const int size = spec.size;
  switch (spec.family) {
    case Family::rs: {
      if (size < 1) throw ValidationError("rs needs at least one element");
      const int groups = spec.groups > 0 ? spec.groups : static_cast<int>(rng.uniform_int(1, size));
      if (groups > size) throw ValidationError("more groups than elements");
      std::vector<int> perm(size);
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), rng);
      // Every group gets one element, the rest are spread at random.
      std::vector<std::vector<int>> part(groups);
      for (int g = 0; g < groups; ++g) part[g].push_back(perm[g]);
      for (int k = groups; k < size; ++k) part[rng.uniform_int(0, groups - 1)].push_back(perm[k]);
      for (auto& g : part) std::sort(g.begin(), g.end());
      inst.n = size;
      inst.structure = RsPartition{part};
      return true;
    }
    case Family::selection: {
      if (size < 1) throw ValidationError("selection needs at least one item");
      if (spec.p > size) throw ValidationError("p exceeds the item count");
      inst.n = size;
      inst.structure = SelectionCardinality{spec.p > 0 ? spec.p : static_cast<int>(rng.uniform_int(1, size))};
      return true;
    }
    case Family::shortest_path: {
      Digraph g;
      if (spec.series_parallel) {
        const int target = spec.arcs > 0 ? spec.arcs : static_cast<int>(rng.uniform_int(1, 12));
        g.node_count = 2;
        g.source = 0;
        g.sink = 1;
        g.arcs = {{0, 1}};
        while (static_cast<int>(g.arcs.size()) < target) {
          const auto pick = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(g.arcs.size()) - 1));
          const auto [u, v] = g.arcs[pick];
          if (rng.coin(0.5)) {
            const int w = g.node_count++;
            g.arcs[pick] = {u, w};
            g.arcs.insert(g.arcs.begin() + static_cast<std::ptrdiff_t>(pick) + 1, {w, v});
          } else {
            g.arcs.insert(g.arcs.begin() + static_cast<std::ptrdiff_t>(pick) + 1, {u, v});
          }
        }
      } else {
        if (size < 2) throw ValidationError("shortest-path needs at least two nodes");
        g.node_count = size;
        g.source = 0;
        g.sink = size - 1;
        for (int u = 0; u < size; ++u)
          for (int v = 0; v < size; ++v) {
            if (u == v || (spec.acyclic && u > v)) continue;
            if (rng.coin(spec.density)) g.arcs.push_back({u, v});
          }
      }
      inst.n = static_cast<int>(g.arcs.size());
      inst.structure = g;
      if (inst.n == 0) return false;
      graph::DigraphIndex idx(g);
      return graph::shortest_path(g, idx, g.source, g.sink, [](int) { return 0.0; }).reachable();
    }
    case Family::spanning_tree: {
      if (size < 1) throw ValidationError("spanning-tree needs at least one node");
      UndirectedGraph g;
      g.node_count = size;
      std::vector<std::vector<char>> has(size, std::vector<char>(size, 0));
      for (int v = 1; v < size; ++v) {
        const int u = static_cast<int>(rng.uniform_int(0, v - 1));
        has[u][v] = 1;
      }
      for (int u = 0; u < size; ++u)
        for (int v = u + 1; v < size; ++v)
          if (has[u][v] || rng.coin(spec.density)) g.edges.push_back({u, v});
      inst.n = static_cast<int>(g.edges.size());
      inst.structure = g;
      inst.mode = FeasibleMode::superset;
      return true;
    }
    case Family::assignment: {
      if (size < 1) throw ValidationError("assignment needs at least one node per side");
      Bipartite b;
      b.left_count = b.right_count = size;
      std::vector<int> perm(size);
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), rng);
      for (int l = 0; l < size; ++l)
        for (int r = 0; r < size; ++r)
          if (perm[l] == r || rng.coin(spec.density)) b.edges.push_back({l, r});
      inst.n = static_cast<int>(b.edges.size());
      inst.structure = b;
      return true;
    }
  }
  return false;
}

}  // namespace detail

/// Seeded random instance. Structures that come out infeasible are redrawn
/// from the same stream.
inline TwoStageInstance gen_random(const RandomSpec& spec) {
  if (spec.scenarios < 1) throw ValidationError("at least one scenario is required");
  SplitMix64 rng(spec.seed);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    TwoStageInstance inst;
    inst.family = spec.family;
    inst.mode = spec.mode;
    if (!detail::random_structure(inst, spec, rng)) continue;
    detail::random_costs(inst, spec, rng);
    validate(inst);
    return inst;
  }
  throw ValidationError("could not draw a feasible random instance; raise the density");
}

}  // namespace riskstage
