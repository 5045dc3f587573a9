#pragma once

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "pandora/harness.hpp"
#include "pandora/instance.hpp"
#include "pandora/mechanisms.hpp"

namespace pandora {

using nlohmann::json;

inline json constraint_to_json(const ConstraintOracle& o) {
  json j;
  switch (o.kind()) {
    case ConstraintKind::KUniform:
      j["kind"] = "k_uniform";
      j["k"] = o.uniform_k();
      break;
    case ConstraintKind::Partition:
      j["kind"] = "partition";
      j["blocks"] = o.blocks();
      j["caps"] = o.caps();
      break;
    case ConstraintKind::Knapsack:
      j["kind"] = "knapsack";
      j["sizes"] = o.sizes();
      j["budget"] = o.budget();
      break;
    case ConstraintKind::Matching: {
      j["kind"] = "matching";
      std::vector<std::vector<int>> edges;
      for (const auto& [u, v] : o.edges()) edges.push_back({u, v});
      j["edges"] = edges;
      break;
    }
    case ConstraintKind::MatroidByOracle:
      throw BadParametersError("oracle-backed matroids have no serialized form");
  }
  return j;
}

inline ConstraintOracle constraint_from_json(const json& j, int n) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "k_uniform")
    return ConstraintOracle::k_uniform(n, j.at("k").get<int>());
  if (kind == "partition")
    return ConstraintOracle::partition(
        n, j.at("blocks").get<std::vector<std::vector<int>>>(),
        j.at("caps").get<std::vector<int>>());
  if (kind == "knapsack")
    return ConstraintOracle::knapsack(j.at("sizes").get<std::vector<double>>(),
                                      j.at("budget").get<double>());
  if (kind == "matching") {
    std::vector<std::pair<int, int>> edges;
    for (const auto& e : j.at("edges"))
      edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
    return ConstraintOracle::matching(edges);
  }
  throw BadParametersError("unknown constraint kind: " + kind);
}

inline json instance_to_json(const Instance& inst) {
  json j;
  json elems = json::array();
  for (const auto& e : inst.elements()) {
    json el;
    el["cost"] = e.cost;
    json atoms = json::array();
    for (const auto& a : e.dist.atoms()) atoms.push_back({a.x, a.y, a.p});
    el["atoms"] = atoms;
    elems.push_back(el);
  }
  j["elements"] = elems;
  j["constraint"] = constraint_to_json(inst.constraint());
  json model;
  model["kind"] = to_string(inst.model().kind);
  model["discount"] = inst.model().discount;
  if (inst.model().cost_division) model["cost_division"] = *inst.model().cost_division;
  j["model"] = model;
  return j;
}

inline Instance instance_from_json(const json& j) {
  std::vector<Element> elems;
  int id = 0;
  for (const auto& el : j.at("elements")) {
    Element e;
    e.id = id++;
    e.cost = el.at("cost").get<double>();
    std::vector<JointAtom> atoms;
    for (const auto& a : el.at("atoms"))
      atoms.push_back({a.at(0).get<double>(), a.at(1).get<double>(),
                       a.at(2).get<double>()});
    e.dist = FiniteJointDistribution(std::move(atoms));
    elems.push_back(std::move(e));
  }
  const int n = static_cast<int>(elems.size());
  ConstraintOracle oracle = constraint_from_json(j.at("constraint"), n);
  UtilityModel model;
  if (j.contains("model")) {
    const auto& m = j.at("model");
    const std::string kind = m.value("kind", "standard");
    if (kind == "standard")
      model.kind = ModelKind::Standard;
    else if (kind == "binary")
      model.kind = ModelKind::Binary;
    else if (kind == "free_agent")
      model.kind = ModelKind::FreeAgent;
    else if (kind == "shared_cost")
      model.kind = ModelKind::SharedCost;
    else
      throw BadParametersError("unknown model kind: " + kind);
    model.discount = m.value("discount", 0.0);
    if (m.contains("cost_division"))
      model.cost_division = m.at("cost_division").get<std::vector<double>>();
  }
  return Instance(std::move(elems), std::move(oracle), model);
}

inline Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw BadParametersError("cannot open instance file: " + path);
  json j;
  in >> j;
  return instance_from_json(j);
}

// Mechanisms are dumped with enough provenance to replay an experiment.
inline json mechanism_to_json(const SingleProposalMechanism& mech) {
  json j;
  std::vector<int> wl;
  for (std::size_t i = 0; i < mech.family.whitelist.size(); ++i)
    if (mech.family.whitelist[i]) wl.push_back(static_cast<int>(i));
  j["whitelist"] = wl;
  json rules = json::array();
  for (const auto& r : mech.family.rules) rules.push_back({r.t, r.q});
  j["thresholds"] = rules;
  j["sub_family"] = constraint_to_json(mech.family.sub);
  if (mech.cost_division) j["cost_division"] = *mech.cost_division;
  j["eval_discount"] = mech.eval_discount;
  j["alpha"] = mech.alpha;
  json prov;
  prov["constructor"] = mech.prov.constructor;
  prov["seed"] = mech.prov.seed;
  json params = json::object();
  for (const auto& [k, v] : mech.prov.params) params[k] = v;
  prov["params"] = params;
  j["provenance"] = prov;
  return j;
}

}  // namespace pandora
