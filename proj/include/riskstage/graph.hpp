#pragma once

// Small-graph primitives shared by the recourse solvers, the oracles and the
// network algorithms. Everything here targets desk-scale graphs.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <queue>
#include <vector>

#include "riskstage/errors.hpp"
#include "riskstage/model.hpp"

namespace riskstage::graph {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

class UnionFind {
 public:
  explicit UnionFind(int n) : parent_(n), components_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  int find(int v) {
    while (parent_[v] != v) {
      parent_[v] = parent_[parent_[v]];
      v = parent_[v];
    }
    return v;
  }

  /// Returns false when u and v were already connected.
  bool unite(int u, int v) {
    u = find(u);
    v = find(v);
    if (u == v) return false;
    if (u < v) std::swap(u, v);
    parent_[u] = v;
    --components_;
    return true;
  }

  int components() const { return components_; }

 private:
  std::vector<int> parent_;
  int components_;
};

/// True when the chosen edges contain no cycle.
inline bool is_forest(int node_count, const std::vector<Edge>& edges, const Choice& chosen) {
  UnionFind uf(node_count);
  for (std::size_t e = 0; e < edges.size(); ++e)
    if (chosen[e] && !uf.unite(edges[e].first, edges[e].second)) return false;
  return true;
}

/// True when the chosen edges connect all nodes.
inline bool is_connected(int node_count, const std::vector<Edge>& edges, const Choice& chosen) {
  UnionFind uf(node_count);
  for (std::size_t e = 0; e < edges.size(); ++e)
    if (chosen[e]) uf.unite(edges[e].first, edges[e].second);
  return uf.components() <= 1;
}

/// Adjacency view of a digraph with a cached topological order when acyclic.
struct DigraphIndex {
  std::vector<std::vector<int>> out;  // arc ids leaving each node, ascending
  std::vector<std::vector<int>> in;
  std::optional<std::vector<int>> topological;

  explicit DigraphIndex(const Digraph& g) : out(g.node_count), in(g.node_count) {
    for (std::size_t a = 0; a < g.arcs.size(); ++a) {
      out[g.arcs[a].first].push_back(static_cast<int>(a));
      in[g.arcs[a].second].push_back(static_cast<int>(a));
    }
    std::vector<int> indegree(g.node_count);
    for (const auto& arc : g.arcs) ++indegree[arc.second];
    std::vector<int> order;
    std::vector<int> stack;
    for (int v = g.node_count - 1; v >= 0; --v)
      if (indegree[v] == 0) stack.push_back(v);
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      order.push_back(v);
      for (int a : out[v])
        if (--indegree[g.arcs[a].second] == 0) stack.push_back(g.arcs[a].second);
    }
    if (static_cast<int>(order.size()) == g.node_count) topological = std::move(order);
  }
};

struct PathResult {
  double cost = kInf;
  std::vector<int> arcs;  // in travel order; empty when unreachable or from == to
  bool reachable() const { return cost < kInf; }
};

/// Shortest path from `from` to `to` with arc weights `weight(a)` >= 0. Uses a
/// topological sweep on acyclic graphs and Dijkstra otherwise. Among equal
/// labels the first relaxation found is kept.
template <typename WeightFn>
PathResult shortest_path(const Digraph& g, const DigraphIndex& idx, int from, int to, WeightFn&& weight) {
  const int nn = g.node_count;
  std::vector<double> dist(nn, kInf);
  std::vector<int> pred(nn, -1);
  dist[from] = 0.0;
  if (idx.topological) {
    bool started = false;
    for (int v : *idx.topological) {
      if (v == from) started = true;
      if (!started || dist[v] == kInf) continue;
      for (int a : idx.out[v]) {
        const int w = g.arcs[a].second;
        const double nd = dist[v] + weight(a);
        if (nd < dist[w]) {
          dist[w] = nd;
          pred[w] = a;
        }
      }
    }
  } else {
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    std::vector<char> done(nn, 0);
    heap.push({0.0, from});
    while (!heap.empty()) {
      auto [d, v] = heap.top();
      heap.pop();
      if (done[v]) continue;
      done[v] = 1;
      for (int a : idx.out[v]) {
        const int w = g.arcs[a].second;
        const double nd = d + weight(a);
        if (nd < dist[w]) {
          dist[w] = nd;
          pred[w] = a;
          heap.push({nd, w});
        }
      }
    }
  }
  PathResult r;
  r.cost = dist[to];
  if (r.reachable()) {
    for (int v = to; v != from; v = g.arcs[pred[v]].first) r.arcs.push_back(pred[v]);
    std::reverse(r.arcs.begin(), r.arcs.end());
  }
  return r;
}

/// Distance only, with reused buffers: a topological sweep on acyclic graphs
/// and a binary-heap Dijkstra otherwise. Dijkstra stops as soon as every
/// remaining label exceeds `limit` and then returns such a label, a lower
/// bound on the true distance.
template <typename WeightFn>
double shortest_distance(const Digraph& g, const DigraphIndex& idx, int from, int to, WeightFn&& weight,
                         double limit = kInf) {
  thread_local std::vector<double> dist;
  dist.assign(g.node_count, kInf);
  dist[from] = 0.0;
  if (idx.topological) {
    bool started = false;
    for (int v : *idx.topological) {
      if (v == from) started = true;
      if (!started || dist[v] == kInf) continue;
      for (int a : idx.out[v]) {
        const int w = g.arcs[a].second;
        const double nd = dist[v] + weight(a);
        if (nd < dist[w]) dist[w] = nd;
      }
    }
    return dist[to];
  }
  using Item = std::pair<double, int>;
  thread_local std::vector<Item> heap;
  heap.clear();
  heap.push_back({0.0, from});
  while (!heap.empty()) {
    std::pop_heap(heap.begin(), heap.end(), std::greater<>());
    const auto [d, v] = heap.back();
    heap.pop_back();
    if (d > dist[v]) continue;
    if (v == to || d > limit) return d;
    for (int a : idx.out[v]) {
      const int w = g.arcs[a].second;
      const double nd = d + weight(a);
      if (nd < dist[w]) {
        dist[w] = nd;
        heap.push_back({nd, w});
        std::push_heap(heap.begin(), heap.end(), std::greater<>());
      }
    }
  }
  return dist[to];
}

/// Every simple path from `from` to `to` as an arc list, in DFS order (arcs
/// explored by ascending id). Throws GuardError above `limit` paths.
inline std::vector<std::vector<int>> simple_paths(const Digraph& g, const DigraphIndex& idx, int from, int to,
                                                  std::size_t limit) {
  std::vector<std::vector<int>> paths;
  std::vector<int> current;
  std::vector<char> on_path(g.node_count, 0);
  std::function<void(int)> dfs = [&](int v) {
    if (v == to) {
      paths.push_back(current);
      if (paths.size() > limit) throw GuardError("simple path enumeration exceeded its guard");
      return;
    }
    on_path[v] = 1;
    for (int a : idx.out[v]) {
      const int w = g.arcs[a].second;
      if (on_path[w]) continue;
      current.push_back(a);
      dfs(w);
      current.pop_back();
    }
    on_path[v] = 0;
  };
  dfs(from);
  return paths;
}

/// Every spanning tree as a sorted edge list, by include/exclude branching over
/// edges in id order (include = contract, exclude = delete).
inline std::vector<std::vector<int>> spanning_trees(const UndirectedGraph& g, std::size_t limit) {
  std::vector<std::vector<int>> trees;
  const int m = static_cast<int>(g.edges.size());
  const int need = g.node_count - 1;
  if (need == 0) return {{}};
  if (!is_connected(g.node_count, g.edges, Choice(m, 1))) return trees;
  std::vector<int> chosen;
  std::function<void(int, UnionFind&)> rec = [&](int e, UnionFind& uf) {
    if (static_cast<int>(chosen.size()) == need) {
      trees.push_back(chosen);
      if (trees.size() > limit) throw GuardError("spanning tree enumeration exceeded its guard");
      return;
    }
    if (e == m || m - e < need - static_cast<int>(chosen.size())) return;
    const auto [u, v] = g.edges[e];
    if (uf.find(u) != uf.find(v)) {
      UnionFind copy = uf;
      copy.unite(u, v);
      chosen.push_back(e);
      rec(e + 1, copy);
      chosen.pop_back();
    }
    rec(e + 1, uf);
  };
  UnionFind uf(g.node_count);
  rec(0, uf);
  return trees;
}

/// Every perfect matching (left side matched in order, edges by ascending id).
inline std::vector<std::vector<int>> perfect_matchings(const Bipartite& g, std::size_t limit) {
  std::vector<std::vector<int>> result;
  if (g.left_count != g.right_count) return result;
  std::vector<std::vector<int>> by_left(g.left_count);
  for (std::size_t e = 0; e < g.edges.size(); ++e) by_left[g.edges[e].first].push_back(static_cast<int>(e));
  std::vector<char> used(g.right_count, 0);
  std::vector<int> chosen;
  std::function<void(int)> rec = [&](int l) {
    if (l == g.left_count) {
      auto sorted = chosen;
      std::sort(sorted.begin(), sorted.end());
      result.push_back(std::move(sorted));
      if (result.size() > limit) throw GuardError("perfect matching enumeration exceeded its guard");
      return;
    }
    for (int e : by_left[l]) {
      const int r = g.edges[e].second;
      if (used[r]) continue;
      used[r] = 1;
      chosen.push_back(e);
      rec(l + 1);
      chosen.pop_back();
      used[r] = 0;
    }
  };
  rec(0);
  return result;
}

/// Minimum-weight perfect matching by dynamic programming over subsets of the
/// right side. Returns the chosen edge ids or nullopt when none exists. Among
/// equal totals the edge with the smaller id wins at each left node.
template <typename WeightFn>
std::optional<std::vector<int>> min_cost_perfect_matching(const Bipartite& g, WeightFn&& weight) {
  if (g.left_count != g.right_count) return std::nullopt;
  const int k = g.left_count;
  if (k > 22) throw GuardError("matching dynamic program limited to 22 nodes per side");
  std::vector<std::vector<int>> by_left(k);
  for (std::size_t e = 0; e < g.edges.size(); ++e) by_left[g.edges[e].first].push_back(static_cast<int>(e));
  const std::size_t states = std::size_t{1} << k;
  // best[mask]: cheapest way to match left nodes popcount(mask).. k-1 to the
  // right nodes outside mask; filled backwards from the full mask.
  std::vector<double> best(states, kInf);
  std::vector<int> choice(states, -1);
  best[states - 1] = 0.0;
  for (std::size_t mask = states - 1; mask-- > 0;) {
    const int l = __builtin_popcountll(mask);
    for (int e : by_left[l]) {
      const int r = g.edges[e].second;
      if (mask & (std::size_t{1} << r)) continue;
      const std::size_t next = mask | (std::size_t{1} << r);
      if (best[next] == kInf) continue;
      const double cand = weight(e) + best[next];
      if (cand < best[mask]) {
        best[mask] = cand;
        choice[mask] = e;
      }
    }
  }
  if (best[0] == kInf) return std::nullopt;
  std::vector<int> edges;
  std::size_t mask = 0;
  for (int l = 0; l < k; ++l) {
    const int e = choice[mask];
    edges.push_back(e);
    mask |= std::size_t{1} << g.edges[e].second;
  }
  std::sort(edges.begin(), edges.end());
  return edges;
}

struct Cut {
  double value = kInf;
  std::vector<int> side;  // sorted node ids on one side
};

/// Stoer-Wagner global minimum cut on a symmetric weight matrix. Every
/// cut-of-the-phase is reported through `phase_cut`, the minimum is returned.
inline Cut stoer_wagner(std::vector<std::vector<double>> w,
                        const std::function<void(const Cut&)>& phase_cut = {}) {
  const int n = static_cast<int>(w.size());
  Cut best;
  if (n < 2) return best;
  std::vector<std::vector<int>> members(n);
  for (int v = 0; v < n; ++v) members[v] = {v};
  std::vector<int> alive(n);
  std::iota(alive.begin(), alive.end(), 0);
  while (alive.size() > 1) {
    const int k = static_cast<int>(alive.size());
    std::vector<double> key(k, 0.0);
    std::vector<char> added(k, 0);
    int prev = -1, last = -1;
    for (int step = 0; step < k; ++step) {
      int pick = -1;
      for (int i = 0; i < k; ++i)
        if (!added[i] && (pick == -1 || key[i] > key[pick])) pick = i;
      added[pick] = 1;
      prev = last;
      last = pick;
      for (int i = 0; i < k; ++i)
        if (!added[i]) key[i] += w[alive[pick]][alive[i]];
    }
    Cut phase;
    phase.value = key[last];
    phase.side = members[alive[last]];
    std::sort(phase.side.begin(), phase.side.end());
    if (phase_cut) phase_cut(phase);
    if (phase.value < best.value) best = phase;
    const int a = alive[prev], b = alive[last];
    for (int v = 0; v < n; ++v) {
      w[a][v] += w[b][v];
      w[v][a] = w[a][v];
    }
    members[a].insert(members[a].end(), members[b].begin(), members[b].end());
    alive.erase(alive.begin() + last);
  }
  return best;
}

}  // namespace riskstage::graph
