#pragma once

// Independent reference computations for the tests. Nothing here calls the
// library's solvers; only the model types are shared.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <vector>

#include "riskstage/model.hpp"
#include "riskstage/risk.hpp"
#include "riskstage/lp.hpp"
#include "riskstage/gadgets.hpp"

namespace oracle {

using riskstage::Choice;
using riskstage::Family;
using riskstage::FeasibleMode;
using riskstage::TwoStageInstance;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// min over a uniform grid of g(t) = t + E[(X - t)+] / (1 - alpha), t from
/// min X to max X in `steps` steps.
inline double cvar_grid(const std::vector<double>& v, const std::vector<double>& p, double alpha, int steps) {
  const double lo = *std::min_element(v.begin(), v.end());
  const double hi = *std::max_element(v.begin(), v.end());
  double best = kInf;
  for (int s = 0; s <= steps; ++s) {
    const double t = lo + (hi - lo) * s / steps;
    double tail = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k) tail += p[k] * std::max(0.0, v[k] - t);
    best = std::min(best, t + tail / (1.0 - alpha));
  }
  return best;
}

/// CVaR as the average of the upper (1 - alpha) quantile mass, by sorting.
inline double cvar_sorted(std::vector<double> v, std::vector<double> p, double alpha) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return v[a] > v[b]; });
  double mass = 1.0 - alpha, acc = 0.0;
  for (auto k : idx) {
    const double take = std::min(mass, p[k]);
    acc += take * v[k];
    mass -= take;
    if (mass <= 0.0) break;
  }
  return acc / (1.0 - alpha);
}

// ---- linear programming by vertex enumeration -------------------------------

/// Solves A z = b by Gaussian elimination with partial pivoting; empty when
/// singular.
inline std::optional<std::vector<double>> solve_square(std::vector<std::vector<double>> a, std::vector<double> b) {
  const int n = static_cast<int>(b.size());
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r)
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    if (std::abs(a[piv][c]) < 1e-10) return std::nullopt;
    std::swap(a[piv], a[c]);
    std::swap(b[piv], b[c]);
    for (int r = 0; r < n; ++r) {
      if (r == c) continue;
      const double f = a[r][c] / a[c][c];
      for (int k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  std::vector<double> z(n);
  for (int i = 0; i < n; ++i) z[i] = b[i] / a[i][i];
  return z;
}

/// Optimum of a bounded LP (finite bounds on every variable) by trying every
/// choice of n tight constraints. Empty when infeasible.
inline std::optional<double> lp_vertex_optimum(const riskstage::LpProblem& lp, double tol = 1e-7) {
  const int n = lp.variable_count;
  struct Hyper {
    std::vector<double> a;
    double b;
  };
  std::vector<Hyper> all;
  for (const auto& row : lp.rows) {
    Hyper h{std::vector<double>(n, 0.0), row.rhs};
    for (auto [v, c] : row.coefficients) h.a[v] += c;
    all.push_back(h);
  }
  for (int v = 0; v < n; ++v) {
    Hyper lo{std::vector<double>(n, 0.0), lp.lower[v]};
    lo.a[v] = 1.0;
    all.push_back(lo);
    Hyper hi{std::vector<double>(n, 0.0), lp.upper[v]};
    hi.a[v] = 1.0;
    all.push_back(hi);
  }
  auto feasible = [&](const std::vector<double>& z) {
    for (int v = 0; v < n; ++v)
      if (z[v] < lp.lower[v] - tol || z[v] > lp.upper[v] + tol) return false;
    for (const auto& row : lp.rows) {
      double s = 0.0;
      for (auto [v, c] : row.coefficients) s += c * z[v];
      if (row.relation == riskstage::Relation::le && s > row.rhs + tol) return false;
      if (row.relation == riskstage::Relation::ge && s < row.rhs - tol) return false;
      if (row.relation == riskstage::Relation::eq && std::abs(s - row.rhs) > tol) return false;
    }
    return true;
  };
  std::optional<double> best;
  const int m = static_cast<int>(all.size());
  std::vector<int> pick(n);
  auto rec = [&](auto&& self, int start, int depth) -> void {
    if (depth == n) {
      std::vector<std::vector<double>> a;
      std::vector<double> b;
      for (int k : pick) {
        a.push_back(all[k].a);
        b.push_back(all[k].b);
      }
      auto z = solve_square(a, b);
      if (!z || !feasible(*z)) return;
      double obj = 0.0;
      for (int v = 0; v < n; ++v) obj += lp.objective[v] * (*z)[v];
      if (!best || obj < *best) best = obj;
      return;
    }
    for (int k = start; k < m; ++k) {
      pick[depth] = k;
      self(self, k + 1, depth + 1);
    }
  };
  rec(rec, 0, 0);
  return best;
}

// ---- feasibility from first principles --------------------------------------

/// Is `z` (a 0/1 vector over elements) a member of X, or a superset of one in
/// superset mode? Written from the definitions, without the library's solvers.
inline bool in_feasible_set(const TwoStageInstance& inst, const Choice& z) {
  const bool exact = inst.mode == FeasibleMode::exact;
  const int count = static_cast<int>(std::count(z.begin(), z.end(), 1));
  switch (inst.family) {
    case Family::selection:
      return exact ? count == inst.cardinality().p : count >= inst.cardinality().p;
    case Family::rs:
      for (const auto& g : inst.groups().groups) {
        int c = 0;
        for (int i : g) c += z[i];
        if (exact ? c != 1 : c < 1) return false;
      }
      return true;
    case Family::shortest_path: {
      const auto& g = inst.digraph();
      if (exact) {
        // A simple s-t path: walk from s along chosen arcs, visiting each node
        // once, and use every chosen arc.
        std::vector<int> outdeg(g.node_count, 0), indeg(g.node_count, 0);
        for (int a = 0; a < inst.n; ++a)
          if (z[a]) {
            ++outdeg[g.arcs[a].first];
            ++indeg[g.arcs[a].second];
          }
        if (count == 0) return false;
        int v = g.source, used = 0;
        std::vector<char> seen(g.node_count, 0);
        seen[v] = 1;
        while (v != g.sink) {
          if (outdeg[v] != 1) return false;
          int next = -1;
          for (int a = 0; a < inst.n; ++a)
            if (z[a] && g.arcs[a].first == v) next = g.arcs[a].second;
          ++used;
          if (seen[next]) return false;
          seen[next] = 1;
          v = next;
        }
        return used == count;
      }
      std::vector<char> reach(g.node_count, 0);
      reach[g.source] = 1;
      for (bool grew = true; grew;) {
        grew = false;
        for (int a = 0; a < inst.n; ++a)
          if (z[a] && reach[g.arcs[a].first] && !reach[g.arcs[a].second]) reach[g.arcs[a].second] = grew = true;
      }
      return reach[g.sink];
    }
    case Family::spanning_tree: {
      const auto& g = inst.graph();
      std::vector<int> label(g.node_count);
      std::iota(label.begin(), label.end(), 0);
      bool cycle = false;
      for (int e = 0; e < inst.n; ++e) {
        if (!z[e]) continue;
        const int a = label[g.edges[e].first], b = label[g.edges[e].second];
        if (a == b) {
          cycle = true;
          continue;
        }
        for (auto& l : label)
          if (l == b) l = a;
      }
      for (int l : label)
        if (l != label[0]) return false;
      return exact ? !cycle && count == g.node_count - 1 : true;
    }
    case Family::assignment: {
      const auto& b = inst.bipartite();
      if (exact) {
        std::vector<int> dl(b.left_count, 0), dr(b.right_count, 0);
        for (int e = 0; e < inst.n; ++e)
          if (z[e]) {
            ++dl[b.edges[e].first];
            ++dr[b.edges[e].second];
          }
        return std::all_of(dl.begin(), dl.end(), [](int d) { return d == 1; }) &&
               std::all_of(dr.begin(), dr.end(), [](int d) { return d == 1; });
      }
      std::vector<int> perm(b.right_count);
      std::iota(perm.begin(), perm.end(), 0);
      do {
        bool ok = true;
        for (int l = 0; l < b.left_count && ok; ++l) {
          bool has = false;
          for (int e = 0; e < inst.n; ++e)
            if (z[e] && b.edges[e].first == l && b.edges[e].second == perm[l]) has = true;
          ok = has;
        }
        if (ok) return true;
      } while (std::next_permutation(perm.begin(), perm.end()));
      return false;
    }
  }
  return false;
}

inline Choice from_mask(std::uint64_t mask, int n) {
  Choice z(n);
  for (int i = 0; i < n; ++i) z[i] = static_cast<std::uint8_t>((mask >> i) & 1U);
  return z;
}

/// Two-stage optimum over all pairs (x, y_j) of 0/1 vectors. Exponential in
/// 2n; meant for n <= 8. Spanning-tree first stages may contain cycles here.
inline double naive_two_stage(const TwoStageInstance& inst, const riskstage::Objective& objective) {
  const int n = inst.n, k = inst.scenario_count();
  const std::uint64_t full = std::uint64_t{1} << n;
  std::vector<char> member(full);
  for (std::uint64_t z = 0; z < full; ++z) member[z] = in_feasible_set(inst, from_mask(z, n));
  double best = kInf;
  for (std::uint64_t x = 0; x < full; ++x) {
    double first = 0.0;
    for (int i = 0; i < n; ++i)
      if ((x >> i) & 1U) first += inst.first_stage[i];
    std::vector<double> rc(k, kInf);
    for (std::uint64_t y = 0; y < full; ++y) {
      if ((x & y) || !member[x | y]) continue;
      for (int j = 0; j < k; ++j) {
        double c = 0.0;
        for (int i = 0; i < n; ++i)
          if ((y >> i) & 1U) c += inst.scenario_costs[j][i];
        rc[j] = std::min(rc[j], c);
      }
    }
    if (rc[0] == kInf) continue;
    best = std::min(best, first + objective.apply(riskstage::DiscreteDistribution::from(rc, inst.probabilities)));
  }
  return best;
}

// ---- combinatorial witnesses -------------------------------------------------

inline int min_set_cover(const riskstage::SetCoverInput& sc) {
  const int m = static_cast<int>(sc.sets.size());
  int best = m + 1;
  for (std::uint32_t pick = 0; pick < (1U << m); ++pick) {
    std::vector<char> cov(sc.universe, 0);
    for (int j = 0; j < m; ++j)
      if ((pick >> j) & 1U)
        for (int u : sc.sets[j]) cov[u] = 1;
    if (std::all_of(cov.begin(), cov.end(), [](char c) { return c; }))
      best = std::min(best, __builtin_popcount(pick));
  }
  return best;
}

/// Hamiltonian path from `first` to `last` by permutation search.
inline bool hamiltonian_path(int nodes, const std::vector<std::vector<char>>& adj, int first, int last) {
  std::vector<int> order;
  for (int v = 0; v < nodes; ++v)
    if (v != first && v != last) order.push_back(v);
  do {
    std::vector<int> path{first};
    path.insert(path.end(), order.begin(), order.end());
    if (last != first) path.push_back(last);
    bool ok = true;
    for (std::size_t i = 0; i + 1 < path.size() && ok; ++i) ok = adj[path[i]][path[i + 1]];
    if (ok) return true;
  } while (std::next_permutation(order.begin(), order.end()));
  return false;
}

/// Truth-table satisfiability.
inline bool satisfiable(const riskstage::CnfInput& f) {
  for (std::uint32_t a = 0; a < (1U << f.variables); ++a) {
    bool all = true;
    for (const auto& c : f.clauses) {
      bool any = false;
      for (int lit : c) {
        const bool val = (a >> (std::abs(lit) - 1)) & 1U;
        if ((lit > 0) == val) any = true;
      }
      if (!any) {
        all = false;
        break;
      }
    }
    if (all) return true;
  }
  return false;
}

/// Smallest fractional crossing weight over all 2^(n-1) - 1 node cuts, where
/// the weight of edge e is w[e].
inline double min_cut_weight(const riskstage::UndirectedGraph& g, const std::vector<double>& w) {
  const int n = g.node_count;
  double best = kInf;
  for (std::uint32_t side = 1; side < (1U << (n - 1)); ++side) {
    // Node 0 stays outside; bit v-1 places node v inside.
    auto inside = [&](int v) { return v > 0 && ((side >> (v - 1)) & 1U); };
    double s = 0.0;
    for (std::size_t e = 0; e < g.edges.size(); ++e)
      if (inside(g.edges[e].first) != inside(g.edges[e].second)) s += w[e];
    best = std::min(best, s);
  }
  return best;
}

}  // namespace oracle
