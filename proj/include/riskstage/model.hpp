#pragma once

// Two-stage instances, plans and solve reports.

#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "riskstage/errors.hpp"
#include "riskstage/risk.hpp"

namespace riskstage {

enum class Family { rs, selection, shortest_path, spanning_tree, assignment };

/// `exact`: x + y must be a member of X. `superset`: x + y must contain one.
enum class FeasibleMode { exact, superset };

inline std::string to_string(Family f) {
  switch (f) {
    case Family::rs:
      return "rs";
    case Family::selection:
      return "selection";
    case Family::shortest_path:
      return "shortest-path";
    case Family::spanning_tree:
      return "spanning-tree";
    case Family::assignment:
      return "assignment";
  }
  return "";
}

inline std::string to_string(FeasibleMode m) { return m == FeasibleMode::exact ? "exact" : "superset"; }

using Edge = std::pair<int, int>;

/// Disjoint tool groups covering every element; one tool per group.
struct RsPartition {
  std::vector<std::vector<int>> groups;
  friend bool operator==(const RsPartition&, const RsPartition&) = default;
};

/// Exactly `p` of the n items.
struct SelectionCardinality {
  int p = 1;
  friend bool operator==(const SelectionCardinality&, const SelectionCardinality&) = default;
};

/// Element i is arc `arcs[i]` = (tail, head).
struct Digraph {
  int node_count = 0;
  std::vector<Edge> arcs;
  int source = 0;
  int sink = 0;
  friend bool operator==(const Digraph&, const Digraph&) = default;
};

/// Element i is edge `edges[i]`.
struct UndirectedGraph {
  int node_count = 0;
  std::vector<Edge> edges;
  friend bool operator==(const UndirectedGraph&, const UndirectedGraph&) = default;
};

/// Element i is edge `edges[i]` = (left node, right node).
struct Bipartite {
  int left_count = 0;
  int right_count = 0;
  std::vector<Edge> edges;
  friend bool operator==(const Bipartite&, const Bipartite&) = default;
};

using FamilyStructure = std::variant<RsPartition, SelectionCardinality, Digraph, UndirectedGraph, Bipartite>;

/// 0/1 indicator vector over the n elements.
using Choice = std::vector<std::uint8_t>;

struct TwoStageInstance {
  Family family = Family::selection;
  FeasibleMode mode = FeasibleMode::exact;
  int n = 0;
  std::vector<double> first_stage;                  // C, length n
  std::vector<std::vector<double>> scenario_costs;  // c, K rows of length n
  std::vector<double> probabilities;                // p, length K
  FamilyStructure structure;
  std::optional<double> alpha;

  int scenario_count() const { return static_cast<int>(scenario_costs.size()); }

  const RsPartition& groups() const { return std::get<RsPartition>(structure); }
  const SelectionCardinality& cardinality() const { return std::get<SelectionCardinality>(structure); }
  const Digraph& digraph() const { return std::get<Digraph>(structure); }
  const UndirectedGraph& graph() const { return std::get<UndirectedGraph>(structure); }
  const Bipartite& bipartite() const { return std::get<Bipartite>(structure); }

  friend bool operator==(const TwoStageInstance&, const TwoStageInstance&) = default;
};

namespace detail {

inline void fail(const std::string& msg) { throw ValidationError(msg); }

inline void check_costs(const std::vector<double>& v, const char* what) {
  for (double c : v)
    if (!std::isfinite(c) || c < 0.0) fail(std::string(what) + " must be finite and nonnegative");
}

inline void check_endpoints(const std::vector<Edge>& edges, int left, int right, const char* what) {
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto [u, v] = edges[e];
    if (u < 0 || u >= left || v < 0 || v >= right) {
      std::ostringstream os;
      os << what << " " << e << " has a dangling endpoint (" << u << "," << v << ")";
      fail(os.str());
    }
  }
}

}  // namespace detail

/// Throws ValidationError naming the first violated invariant.
inline void validate(const TwoStageInstance& inst) {
  using detail::fail;
  if (inst.n < 0) fail("n must be nonnegative");
  if (static_cast<int>(inst.first_stage.size()) != inst.n) fail("first_stage_costs must have n entries");
  detail::check_costs(inst.first_stage, "first_stage_costs");
  if (inst.scenario_costs.empty()) fail("at least one scenario is required");
  if (inst.probabilities.size() != inst.scenario_costs.size())
    fail("one probability per scenario is required");
  double total = 0.0;
  for (double p : inst.probabilities) {
    if (!(p > 0.0)) fail("scenario probabilities must be positive");
    total += p;
  }
  if (std::abs(total - 1.0) > DiscreteDistribution::kProbabilityTolerance) {
    std::ostringstream os;
    os << "probabilities sum to " << total;
    fail(os.str());
  }
  for (const auto& row : inst.scenario_costs) {
    if (static_cast<int>(row.size()) != inst.n) fail("every scenario row must have n entries");
    detail::check_costs(row, "scenario costs");
  }
  if (inst.alpha) check_alpha(*inst.alpha);

  switch (inst.family) {
    case Family::rs: {
      if (!std::holds_alternative<RsPartition>(inst.structure)) fail("rs instance needs groups");
      std::vector<int> owner(inst.n, -1);
      const auto& groups = inst.groups().groups;
      for (std::size_t g = 0; g < groups.size(); ++g) {
        if (groups[g].empty()) fail("rs group " + std::to_string(g) + " is empty");
        for (int i : groups[g]) {
          if (i < 0 || i >= inst.n) fail("rs group refers to element " + std::to_string(i) + " outside [0,n)");
          if (owner[i] != -1) fail("element " + std::to_string(i) + " in two groups");
          owner[i] = static_cast<int>(g);
        }
      }
      for (int i = 0; i < inst.n; ++i)
        if (owner[i] == -1) fail("element " + std::to_string(i) + " is in no group");
      break;
    }
    case Family::selection: {
      if (!std::holds_alternative<SelectionCardinality>(inst.structure)) fail("selection instance needs p");
      const int p = inst.cardinality().p;
      if (p < 1 || p > inst.n) fail("selection requires 1 <= p <= n");
      break;
    }
    case Family::shortest_path: {
      if (!std::holds_alternative<Digraph>(inst.structure)) fail("shortest-path instance needs a digraph");
      const auto& g = inst.digraph();
      if (static_cast<int>(g.arcs.size()) != inst.n) fail("digraph must have exactly n arcs");
      if (g.node_count < 2) fail("digraph needs at least two nodes");
      detail::check_endpoints(g.arcs, g.node_count, g.node_count, "arc");
      for (const auto& [u, v] : g.arcs)
        if (u == v) fail("self-loop arcs are not allowed");
      if (g.source < 0 || g.source >= g.node_count || g.sink < 0 || g.sink >= g.node_count)
        fail("source/sink outside the node range");
      if (g.source == g.sink) fail("source and sink must differ");
      break;
    }
    case Family::spanning_tree: {
      if (!std::holds_alternative<UndirectedGraph>(inst.structure)) fail("spanning-tree instance needs a graph");
      if (inst.mode != FeasibleMode::superset) fail("spanning-tree instances use superset mode");
      const auto& g = inst.graph();
      if (static_cast<int>(g.edges.size()) != inst.n) fail("graph must have exactly n edges");
      if (g.node_count < 1) fail("graph needs at least one node");
      detail::check_endpoints(g.edges, g.node_count, g.node_count, "edge");
      for (const auto& [u, v] : g.edges)
        if (u == v) fail("self-loop edges are not allowed");
      break;
    }
    case Family::assignment: {
      if (!std::holds_alternative<Bipartite>(inst.structure)) fail("assignment instance needs a bipartite graph");
      const auto& g = inst.bipartite();
      if (static_cast<int>(g.edges.size()) != inst.n) fail("bipartite graph must have exactly n edges");
      if (g.left_count < 0 || g.right_count < 0) fail("side sizes must be nonnegative");
      detail::check_endpoints(g.edges, g.left_count, g.right_count, "edge");
      break;
    }
  }
}

/// First-stage vector plus one recourse vector per scenario.
struct TwoStagePlan {
  Choice x;
  std::vector<Choice> recourse;
  friend bool operator==(const TwoStagePlan&, const TwoStagePlan&) = default;
};

struct SolveReport {
  Objective objective;
  double value = 0.0;
  TwoStagePlan plan;
  std::vector<double> per_scenario_cost;
  std::optional<double> lower_bound;
  std::string algorithm;
  std::optional<std::uint64_t> seed;
};

inline double first_stage_cost(const TwoStageInstance& inst, const Choice& x) {
  double sum = 0.0;
  for (int i = 0; i < inst.n; ++i)
    if (x[i]) sum += inst.first_stage[i];
  return sum;
}

inline double scenario_cost(const TwoStageInstance& inst, const Choice& y, int j) {
  double sum = 0.0;
  const auto& row = inst.scenario_costs[j];
  for (int i = 0; i < inst.n; ++i)
    if (y[i]) sum += row[i];
  return sum;
}

inline std::vector<int> support(const Choice& x) {
  std::vector<int> s;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i]) s.push_back(static_cast<int>(i));
  return s;
}

inline Choice indicator(int n, const std::vector<int>& elements) {
  Choice x(n, 0);
  for (int i : elements) x.at(i) = 1;
  return x;
}

}  // namespace riskstage
