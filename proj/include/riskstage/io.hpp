#pragma once

// JSON documents for instances and solve reports.

#include <string>
#include <vector>

#include "json.hpp"
#include "riskstage/errors.hpp"
#include "riskstage/model.hpp"

namespace riskstage {

using json = nlohmann::json;

namespace detail {

inline Family parse_family(const std::string& s) {
  if (s == "rs") return Family::rs;
  if (s == "selection") return Family::selection;
  if (s == "shortest-path") return Family::shortest_path;
  if (s == "spanning-tree") return Family::spanning_tree;
  if (s == "assignment") return Family::assignment;
  throw ValidationError("unknown family \"" + s + "\"");
}

inline std::vector<Edge> parse_pairs(const json& j, const char* key) {
  std::vector<Edge> out;
  for (const auto& e : j.at(key)) {
    if (!e.is_array() || e.size() != 2) throw ValidationError(std::string(key) + " entries must be pairs");
    out.emplace_back(e[0].get<int>(), e[1].get<int>());
  }
  return out;
}

inline json pairs_to_json(const std::vector<Edge>& edges) {
  json arr = json::array();
  for (const auto& [u, v] : edges) arr.push_back({u, v});
  return arr;
}

}  // namespace detail

/// Parses and validates an instance document. Spanning-tree instances are
/// normalized to superset mode, which is equivalent for acyclic first stages.
inline TwoStageInstance instance_from_json(const json& doc) {
  TwoStageInstance inst;
  try {
    inst.family = detail::parse_family(doc.at("family").get<std::string>());
    const auto mode = doc.value("feasible_mode", std::string("exact"));
    if (mode == "exact")
      inst.mode = FeasibleMode::exact;
    else if (mode == "superset")
      inst.mode = FeasibleMode::superset;
    else
      throw ValidationError("unknown feasible_mode \"" + mode + "\"");
    if (inst.family == Family::spanning_tree) inst.mode = FeasibleMode::superset;
    inst.n = doc.at("n").get<int>();
    inst.first_stage = doc.at("first_stage_costs").get<std::vector<double>>();
    const auto& sc = doc.at("scenarios");
    inst.probabilities = sc.at("probabilities").get<std::vector<double>>();
    inst.scenario_costs = sc.at("costs").get<std::vector<std::vector<double>>>();
    const auto& st = doc.at("structure");
    switch (inst.family) {
      case Family::rs:
        inst.structure = RsPartition{st.at("groups").get<std::vector<std::vector<int>>>()};
        break;
      case Family::selection:
        inst.structure = SelectionCardinality{st.at("p").get<int>()};
        break;
      case Family::shortest_path:
        inst.structure = Digraph{st.at("node_count").get<int>(), detail::parse_pairs(st, "arcs"),
                                 st.at("source").get<int>(), st.at("sink").get<int>()};
        break;
      case Family::spanning_tree:
        inst.structure = UndirectedGraph{st.at("node_count").get<int>(), detail::parse_pairs(st, "edges")};
        break;
      case Family::assignment:
        inst.structure = Bipartite{st.at("left_count").get<int>(), st.at("right_count").get<int>(),
                                   detail::parse_pairs(st, "edges")};
        break;
    }
    if (doc.contains("alpha") && !doc.at("alpha").is_null()) inst.alpha = doc.at("alpha").get<double>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("instance schema violation: ") + e.what());
  }
  validate(inst);
  return inst;
}

inline TwoStageInstance parse_instance(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("malformed JSON: ") + e.what());
  }
  return instance_from_json(doc);
}

inline json instance_to_json(const TwoStageInstance& inst) {
  json doc;
  doc["family"] = to_string(inst.family);
  doc["feasible_mode"] = to_string(inst.mode);
  doc["n"] = inst.n;
  doc["first_stage_costs"] = inst.first_stage;
  doc["scenarios"] = {{"probabilities", inst.probabilities}, {"costs", inst.scenario_costs}};
  json st;
  switch (inst.family) {
    case Family::rs:
      st["groups"] = inst.groups().groups;
      break;
    case Family::selection:
      st["p"] = inst.cardinality().p;
      break;
    case Family::shortest_path: {
      const auto& g = inst.digraph();
      st = {{"node_count", g.node_count}, {"arcs", detail::pairs_to_json(g.arcs)}, {"source", g.source},
            {"sink", g.sink}};
      break;
    }
    case Family::spanning_tree:
      st = {{"node_count", inst.graph().node_count}, {"edges", detail::pairs_to_json(inst.graph().edges)}};
      break;
    case Family::assignment: {
      const auto& g = inst.bipartite();
      st = {{"left_count", g.left_count}, {"right_count", g.right_count}, {"edges", detail::pairs_to_json(g.edges)}};
      break;
    }
  }
  doc["structure"] = st;
  if (inst.alpha) doc["alpha"] = *inst.alpha;
  return doc;
}

/// Canonical text: sorted keys, two-space indent, shortest round-trip doubles.
inline std::string serialize_instance(const TwoStageInstance& inst) { return instance_to_json(inst).dump(2) + "\n"; }

inline json report_to_json(const SolveReport& r) {
  json doc;
  doc["objective"] = r.objective.name();
  if (r.objective.kind == Objective::Kind::cvar) doc["alpha"] = r.objective.alpha;
  doc["value"] = r.value;
  doc["x"] = r.plan.x;
  doc["recourse"] = r.plan.recourse;
  doc["per_scenario_cost"] = r.per_scenario_cost;
  doc["lower_bound"] = r.lower_bound ? json(*r.lower_bound) : json(nullptr);
  doc["algorithm"] = r.algorithm;
  doc["seed"] = r.seed ? json(*r.seed) : json(nullptr);
  return doc;
}

inline std::string serialize_report(const SolveReport& r) { return report_to_json(r).dump(2) + "\n"; }

inline SolveReport report_from_json(const json& doc) {
  SolveReport r;
  try {
    const auto kind = doc.at("objective").get<std::string>();
    if (kind == "expectation")
      r.objective = Objective::expected();
    else if (kind == "robust")
      r.objective = Objective::robust();
    else if (kind == "cvar")
      r.objective = Objective::conditional(doc.at("alpha").get<double>());
    else
      throw ValidationError("unknown objective \"" + kind + "\"");
    r.value = doc.at("value").get<double>();
    r.plan.x = doc.at("x").get<Choice>();
    r.plan.recourse = doc.at("recourse").get<std::vector<Choice>>();
    r.per_scenario_cost = doc.at("per_scenario_cost").get<std::vector<double>>();
    if (!doc.at("lower_bound").is_null()) r.lower_bound = doc.at("lower_bound").get<double>();
    r.algorithm = doc.at("algorithm").get<std::string>();
    if (!doc.at("seed").is_null()) r.seed = doc.at("seed").get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("report schema violation: ") + e.what());
  }
  return r;
}

}  // namespace riskstage
