#pragma once

// Feasible-set enumeration and exact per-family recourse solvers.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <memory>
#include <numeric>
#include <string>
#include <vector>

#include "riskstage/errors.hpp"
#include "riskstage/graph.hpp"
#include "riskstage/model.hpp"

namespace riskstage {

inline constexpr std::size_t kCatalogGuard = 1'000'000;

/// Enumeration guard, raised (never lowered) by RISKSTAGE_GUARD_OVERRIDE.
inline std::size_t guard_limit(std::size_t default_limit) {
  if (const char* env = std::getenv("RISKSTAGE_GUARD_OVERRIDE")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && v > default_limit) return static_cast<std::size_t>(v);
  }
  return default_limit;
}

/// The complete member list of X for an instance.
struct FeasibleCatalog {
  int n = 0;
  std::vector<std::vector<int>> members;  // sorted element ids

  std::vector<Choice> choices() const {
    std::vector<Choice> out;
    out.reserve(members.size());
    for (const auto& m : members) out.push_back(indicator(n, m));
    return out;
  }
};

inline FeasibleCatalog enumerate_feasible(const TwoStageInstance& inst) {
  const std::size_t limit = guard_limit(kCatalogGuard);
  FeasibleCatalog cat;
  cat.n = inst.n;
  switch (inst.family) {
    case Family::selection: {
      const int p = inst.cardinality().p;
      std::vector<int> pick(p);
      std::function<void(int, int)> rec = [&](int start, int depth) {
        if (depth == p) {
          cat.members.push_back(pick);
          if (cat.members.size() > limit) throw GuardError("catalog exceeded its guard");
          return;
        }
        for (int i = start; i <= inst.n - (p - depth); ++i) {
          pick[depth] = i;
          rec(i + 1, depth + 1);
        }
      };
      rec(0, 0);
      break;
    }
    case Family::rs: {
      const auto& groups = inst.groups().groups;
      std::vector<int> pick(groups.size());
      std::function<void(std::size_t)> rec = [&](std::size_t g) {
        if (g == groups.size()) {
          auto sorted = pick;
          std::sort(sorted.begin(), sorted.end());
          cat.members.push_back(std::move(sorted));
          if (cat.members.size() > limit) throw GuardError("catalog exceeded its guard");
          return;
        }
        for (int i : groups[g]) {
          pick[g] = i;
          rec(g + 1);
        }
      };
      rec(0);
      break;
    }
    case Family::shortest_path: {
      const auto& g = inst.digraph();
      graph::DigraphIndex idx(g);
      for (auto& path : graph::simple_paths(g, idx, g.source, g.sink, limit)) {
        std::sort(path.begin(), path.end());
        cat.members.push_back(std::move(path));
      }
      break;
    }
    case Family::spanning_tree:
      cat.members = graph::spanning_trees(inst.graph(), limit);
      break;
    case Family::assignment:
      cat.members = graph::perfect_matchings(inst.bipartite(), limit);
      break;
  }
  return cat;
}

/// Optimal recourse action for one scenario.
struct Completion {
  double cost = 0.0;
  Choice y;
};

/// Exact recourse for a fixed instance. Selection and RS are greedy, spanning
/// trees use Kruskal with the first stage contracted, superset shortest path
/// and superset assignment price first-stage elements at zero, and the exact
/// shortest-path and assignment modes scan the catalog of members containing x.
///
/// Ties: greedy and catalog scans return the lexicographically smallest y;
/// graph solvers keep the first optimum found in ascending element order.
class RecourseSolver {
 public:
  explicit RecourseSolver(const TwoStageInstance& inst, std::shared_ptr<const FeasibleCatalog> catalog = nullptr)
      : inst_(inst), catalog_(std::move(catalog)) {
    if (inst_.family == Family::shortest_path) index_ = std::make_shared<graph::DigraphIndex>(inst_.digraph());
    if (uses_catalog() && !catalog_) catalog_ = std::make_shared<FeasibleCatalog>(enumerate_feasible(inst_));
    if (inst_.mode == FeasibleMode::superset && inst_.family == Family::shortest_path)
      superset_ok_ = graph::shortest_path(inst_.digraph(), *index_, inst_.digraph().source, inst_.digraph().sink,
                                          [](int) { return 0.0; })
                         .reachable();
    if (inst_.mode == FeasibleMode::superset && inst_.family == Family::assignment)
      superset_ok_ = graph::min_cost_perfect_matching(inst_.bipartite(), [](int) { return 0.0; }).has_value();
    if (uses_catalog()) {
      const int k = inst_.scenario_count();
      member_flags_.reserve(catalog_->members.size());
      for (const auto& m : catalog_->members) member_flags_.push_back(indicator(inst_.n, m));
      member_cost_.assign(k, std::vector<double>(catalog_->members.size(), 0.0));
      for (int j = 0; j < k; ++j)
        for (std::size_t m = 0; m < catalog_->members.size(); ++m)
          for (int i : catalog_->members[m]) member_cost_[j][m] += inst_.scenario_costs[j][i];
    }
  }

  const TwoStageInstance& instance() const { return inst_; }

  /// Membership of x in the partial-solution set X'.
  bool completable(const Choice& x) const {
    const auto& inst = inst_;
    const bool exact = inst.mode == FeasibleMode::exact;
    switch (inst.family) {
      case Family::rs: {
        if (!exact) return true;
        for (const auto& group : inst.groups().groups) {
          int count = 0;
          for (int i : group) count += x[i];
          if (count > 1) return false;
        }
        return true;
      }
      case Family::selection:
        return !exact || count(x) <= inst.cardinality().p;
      case Family::shortest_path:
        if (exact) return find_member(x, 0, false) >= 0;
        return superset_ok_;
      case Family::spanning_tree: {
        const auto& g = inst.graph();
        return graph::is_forest(g.node_count, g.edges, x) &&
               graph::is_connected(g.node_count, g.edges, Choice(inst.n, 1));
      }
      case Family::assignment:
        if (exact) return find_member(x, 0, false) >= 0;
        return superset_ok_;
    }
    return false;
  }

  /// Cheapest completion of x under scenario j.
  Completion solve(const Choice& x, int j) const {
    const auto& inst = inst_;
    const auto& c = inst.scenario_costs[j];
    const bool exact = inst.mode == FeasibleMode::exact;
    Completion out;
    out.y.assign(inst.n, 0);
    switch (inst.family) {
      case Family::selection: {
        const int have = count(x);
        const int p = inst.cardinality().p;
        if (exact && have > p) throw InfeasibleError("first stage selects more than p items", j);
        const int need = std::max(0, p - have);
        std::vector<int> free;
        for (int i = 0; i < inst.n; ++i)
          if (!x[i]) free.push_back(i);
        std::sort(free.begin(), free.end(), [&](int a, int b) { return c[a] != c[b] ? c[a] < c[b] : a > b; });
        for (int t = 0; t < need; ++t) {
          out.y[free[t]] = 1;
          out.cost += c[free[t]];
        }
        return out;
      }
      case Family::rs: {
        for (const auto& group : inst.groups().groups) {
          int have = 0;
          for (int i : group) have += x[i];
          if (exact && have > 1) throw InfeasibleError("first stage picks two tools of one group", j);
          if (have > 0) continue;
          int best = group.front();
          for (int i : group)
            if (c[i] < c[best] || (c[i] == c[best] && i > best)) best = i;
          out.y[best] = 1;
          out.cost += c[best];
        }
        return out;
      }
      case Family::spanning_tree: {
        const auto& g = inst.graph();
        graph::UnionFind uf(g.node_count);
        for (int e = 0; e < inst.n; ++e)
          if (x[e] && !uf.unite(g.edges[e].first, g.edges[e].second))
            throw NonCanonicalError("first-stage edge set contains a cycle");
        std::vector<int> order;
        for (int e = 0; e < inst.n; ++e)
          if (!x[e]) order.push_back(e);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return c[a] < c[b]; });
        for (int e : order)
          if (uf.unite(g.edges[e].first, g.edges[e].second)) {
            out.y[e] = 1;
            out.cost += c[e];
          }
        if (uf.components() > 1) throw InfeasibleError("graph is disconnected", j);
        return out;
      }
      case Family::shortest_path:
        if (!exact) {
          const auto& g = inst.digraph();
          auto path = graph::shortest_path(g, *index_, g.source, g.sink, [&](int a) { return x[a] ? 0.0 : c[a]; });
          if (!path.reachable()) throw InfeasibleError("sink unreachable from source", j);
          for (int a : path.arcs)
            if (!x[a]) {
              out.y[a] = 1;
              out.cost += c[a];
            }
          return out;
        }
        return scan(x, j);
      case Family::assignment:
        if (!exact) {
          auto m = graph::min_cost_perfect_matching(inst.bipartite(), [&](int e) { return x[e] ? 0.0 : c[e]; });
          if (!m) throw InfeasibleError("no perfect matching exists", j);
          for (int e : *m)
            if (!x[e]) {
              out.y[e] = 1;
              out.cost += c[e];
            }
          return out;
        }
        return scan(x, j);
    }
    return out;
  }

  /// Recourse cost alone; skips building y where that is the expensive part.
  /// A result above `limit` may be any lower bound above it.
  double cost(const Choice& x, int j, double limit = graph::kInf) const {
    if (inst_.family == Family::shortest_path && inst_.mode == FeasibleMode::superset) {
      const auto& g = inst_.digraph();
      const auto& c = inst_.scenario_costs[j];
      const double d = graph::shortest_distance(g, *index_, g.source, g.sink, [&](int a) { return x[a] ? 0.0 : c[a]; }, limit);
      if (d == graph::kInf) throw InfeasibleError("sink unreachable from source", j);
      return d;
    }
    return solve(x, j).cost;
  }

  std::shared_ptr<const FeasibleCatalog> catalog() const { return catalog_; }

 private:
  bool uses_catalog() const {
    return inst_.mode == FeasibleMode::exact &&
           (inst_.family == Family::shortest_path || inst_.family == Family::assignment);
  }

  static int count(const Choice& x) { return static_cast<int>(std::count(x.begin(), x.end(), 1)); }

  /// Index of the cheapest member containing x under scenario j (ties: the
  /// lexicographically smallest member), or -1.
  int find_member(const Choice& x, int j, bool cheapest) const {
    const auto sx = support(x);
    int best = -1;
    for (std::size_t m = 0; m < member_flags_.size(); ++m) {
      const auto& flags = member_flags_[m];
      bool contains = true;
      for (int i : sx)
        if (!flags[i]) {
          contains = false;
          break;
        }
      if (!contains) continue;
      if (!cheapest) return static_cast<int>(m);
      if (best < 0 || member_cost_[j][m] < member_cost_[j][best] ||
          (member_cost_[j][m] == member_cost_[j][best] && flags < member_flags_[best]))
        best = static_cast<int>(m);
    }
    return best;
  }

  Completion scan(const Choice& x, int j) const {
    const int m = find_member(x, j, true);
    if (m < 0) throw InfeasibleError("no member of the feasible set contains the first stage", j);
    Completion out;
    out.y.assign(inst_.n, 0);
    for (int i : catalog_->members[m])
      if (!x[i]) {
        out.y[i] = 1;
        out.cost += inst_.scenario_costs[j][i];
      }
    return out;
  }

  TwoStageInstance inst_;
  std::shared_ptr<const FeasibleCatalog> catalog_;
  std::shared_ptr<graph::DigraphIndex> index_;
  std::vector<Choice> member_flags_;
  std::vector<std::vector<double>> member_cost_;
  bool superset_ok_ = false;
};

/// True when y is a legal recourse for x: disjoint from x and x + y in X (exact
/// mode) or containing a member of X (superset mode).
inline bool is_feasible_completion(const TwoStageInstance& inst, const Choice& x, const Choice& y) {
  Choice z(inst.n, 0);
  for (int i = 0; i < inst.n; ++i) {
    if (x[i] && y[i]) return false;
    z[i] = x[i] | y[i];
  }
  const bool exact = inst.mode == FeasibleMode::exact;
  switch (inst.family) {
    case Family::rs:
      for (const auto& group : inst.groups().groups) {
        int have = 0;
        for (int i : group) have += z[i];
        if (have == 0 || (exact && have > 1)) return false;
      }
      return true;
    case Family::selection: {
      const int size = static_cast<int>(std::count(z.begin(), z.end(), 1));
      return exact ? size == inst.cardinality().p : size >= inst.cardinality().p;
    }
    case Family::spanning_tree: {
      const auto& g = inst.graph();
      return graph::is_connected(g.node_count, g.edges, z);
    }
    case Family::shortest_path: {
      const auto& g = inst.digraph();
      if (!exact) {
        graph::DigraphIndex idx(g);
        return graph::shortest_path(g, idx, g.source, g.sink, [&](int a) { return z[a] ? 0.0 : graph::kInf; })
                   .cost == 0.0;
      }
      std::vector<int> next(g.node_count, -1);
      std::vector<int> indeg(g.node_count, 0);
      int arcs = 0;
      for (int a = 0; a < inst.n; ++a)
        if (z[a]) {
          if (next[g.arcs[a].first] != -1) return false;
          next[g.arcs[a].first] = a;
          ++indeg[g.arcs[a].second];
          ++arcs;
        }
      std::vector<char> seen(g.node_count, 0);
      int v = g.source, walked = 0;
      seen[v] = 1;
      while (v != g.sink) {
        if (next[v] < 0) return false;
        v = g.arcs[next[v]].second;
        if (seen[v]) return false;
        seen[v] = 1;
        ++walked;
      }
      return walked == arcs;
    }
    case Family::assignment: {
      const auto& g = inst.bipartite();
      if (g.left_count != g.right_count) return false;
      if (!exact)
        return graph::min_cost_perfect_matching(g, [&](int e) { return z[e] ? 0.0 : graph::kInf; })
            .has_value();
      std::vector<int> left(g.left_count, 0), right(g.right_count, 0);
      for (int e = 0; e < inst.n; ++e)
        if (z[e]) {
          ++left[g.edges[e].first];
          ++right[g.edges[e].second];
        }
      return std::all_of(left.begin(), left.end(), [](int d) { return d == 1; }) &&
             std::all_of(right.begin(), right.end(), [](int d) { return d == 1; });
    }
  }
  return false;
}

}  // namespace riskstage
