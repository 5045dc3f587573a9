#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pandora/common.hpp"
#include "pandora/distribution.hpp"
#include "pandora/rng.hpp"
#include "pandora/set_systems.hpp"

namespace pandora {

enum class ModelKind { Standard, Binary, FreeAgent, SharedCost };

inline const char* to_string(ModelKind k) {
  switch (k) {
    case ModelKind::Standard: return "standard";
    case ModelKind::Binary: return "binary";
    case ModelKind::FreeAgent: return "free_agent";
    case ModelKind::SharedCost: return "shared_cost";
  }
  return "?";
}

struct UtilityModel {
  ModelKind kind = ModelKind::Standard;
  // Discount applied to probing costs in delegated evaluation. In the
  // standard model both parties pay (1-discount)c_i; in the free-agent model
  // only the principal's cost is discounted (the agent pays nothing).
  double discount = 0.0;
  // Agent's per-element cost share c'_i, shared-cost model only.
  std::optional<std::vector<double>> cost_division;
};

struct Element {
  int id = 0;
  FiniteJointDistribution dist;
  double cost = 0.0;
};

class Instance {
 public:
  Instance(std::vector<Element> elements, ConstraintOracle constraint,
           UtilityModel model)
      : elements_(std::move(elements)),
        constraint_(std::move(constraint)),
        model_(std::move(model)) {}

  int size() const { return static_cast<int>(elements_.size()); }
  const std::vector<Element>& elements() const { return elements_; }
  const Element& element(int i) const { return elements_[i]; }
  const ConstraintOracle& constraint() const { return constraint_; }
  const UtilityModel& model() const { return model_; }
  double cost(int i) const { return elements_[i].cost; }

  // Undiscounted cost, the non-delegated benchmark always pays this.
  std::vector<double> full_costs() const {
    std::vector<double> c(elements_.size());
    for (std::size_t i = 0; i < elements_.size(); ++i) c[i] = elements_[i].cost;
    return c;
  }

 private:
  std::vector<Element> elements_;
  ConstraintOracle constraint_;
  UtilityModel model_;
};

// Per-element atom index plus an independent uniform tie-break tag. The tag
// is public randomness attached to the realization so that atom-splitting
// thresholds land on exact probabilities.
struct RealizationProfile {
  std::vector<int> atom;
  std::vector<double> tag;
};

inline RealizationProfile sample_profile(const Instance& inst, RngStream& rng) {
  RealizationProfile prof;
  const int n = inst.size();
  prof.atom.resize(n);
  prof.tag.resize(n);
  for (int i = 0; i < n; ++i) {
    const auto& atoms = inst.element(i).dist.atoms();
    std::vector<double> probs(atoms.size());
    for (std::size_t a = 0; a < atoms.size(); ++a) probs[a] = atoms[a].p;
    prof.atom[i] = rng.pick(probs);
    prof.tag[i] = rng.next_unit();
  }
  return prof;
}

inline double realized_x(const Instance& inst, const RealizationProfile& p, int i) {
  return inst.element(i).dist.atoms()[p.atom[i]].x;
}
inline double realized_y(const Instance& inst, const RealizationProfile& p, int i) {
  return inst.element(i).dist.atoms()[p.atom[i]].y;
}

// Cap values tau solve E[(V - tau)+] = c per element, for both marginals.
struct CapValues {
  std::vector<double> tau_x;
  std::vector<double> tau_y;
};

inline CapValues compute_caps(const Instance& inst) {
  CapValues caps;
  const int n = inst.size();
  caps.tau_x.resize(n);
  caps.tau_y.resize(n);
  for (int i = 0; i < n; ++i) {
    caps.tau_x[i] = inst.element(i).dist.marginal_x().cap_value(inst.cost(i));
    caps.tau_y[i] = inst.element(i).dist.marginal_y().cap_value(inst.cost(i));
  }
  return caps;
}

// min(X_i, tau_i) of the realized atom.
inline double truncated_value_x(const Instance& inst, const CapValues& caps,
                                const RealizationProfile& p, int i) {
  return std::min(realized_x(inst, p, i), caps.tau_x[i]);
}
inline double truncated_value_y(const Instance& inst, const CapValues& caps,
                                const RealizationProfile& p, int i) {
  return std::min(realized_y(inst, p, i), caps.tau_y[i]);
}

inline DiscreteMarginal zmin_marginal(const Instance& inst, const CapValues& caps,
                                      int i) {
  return inst.element(i).dist.marginal_x().truncated(caps.tau_x[i]);
}
inline DiscreteMarginal wmin_marginal(const Instance& inst, const CapValues& caps,
                                      int i) {
  return inst.element(i).dist.marginal_y().truncated(caps.tau_y[i]);
}

// Every violated invariant, empty when the instance is well formed.
inline std::vector<std::string> validate_instance(const Instance& inst) {
  std::vector<std::string> bad;
  const int n = inst.size();
  if (inst.constraint().ground_size() != n)
    bad.push_back("constraint ground set does not match element count");
  for (int i = 0; i < n; ++i) {
    const auto& el = inst.element(i);
    const std::string tag = "element " + std::to_string(i) + ": ";
    if (el.id != i) bad.push_back(tag + "id out of order");
    for (const auto& v : el.dist.check()) bad.push_back(tag + v);
    if (!(el.cost >= 0.0)) bad.push_back(tag + "negative cost");
    if (!(el.dist.mean_x() > el.cost))
      bad.push_back(tag + "participation (principal)");
    if (!(el.dist.mean_y() > el.cost))
      bad.push_back(tag + "participation (agent)");
    if (inst.model().kind == ModelKind::Binary) {
      const auto& atoms = el.dist.atoms();
      const bool ok = atoms.size() == 2 && close(atoms[0].x, 0.0) &&
                      close(atoms[0].y, 0.0) && atoms[1].x > 0.0 && atoms[1].y > 0.0;
      if (!ok) bad.push_back(tag + "binary support");
    }
  }
  if (inst.model().discount < 0.0 || inst.model().discount > 1.0)
    bad.push_back("discount out of [0,1]");
  if (inst.model().kind == ModelKind::SharedCost) {
    if (inst.model().discount != 0.0)
      bad.push_back("shared-cost model does not compose with discounts");
    if (inst.model().cost_division) {
      const auto& d = *inst.model().cost_division;
      if (static_cast<int>(d.size()) != n) {
        bad.push_back("cost division size mismatch");
      } else {
        for (int i = 0; i < n; ++i)
          if (d[i] < -kTol || d[i] > inst.cost(i) + kTol)
            bad.push_back("element " + std::to_string(i) + ": cost division bounds");
      }
    }
  } else if (inst.model().cost_division) {
    bad.push_back("cost division given outside the shared-cost model");
  }
  return bad;
}

// Per-probe cost shares under the instance model. An explicit division (from
// a mechanism) overrides the model's for the shared-cost split; an explicit
// discount overrides the model's for the principal side.
inline double agent_cost_share(const Instance& inst, int i,
                               const std::vector<double>* division = nullptr) {
  switch (inst.model().kind) {
    case ModelKind::FreeAgent:
      return 0.0;
    case ModelKind::SharedCost: {
      if (division) return (*division)[i];
      if (inst.model().cost_division) return (*inst.model().cost_division)[i];
      return inst.cost(i);
    }
    case ModelKind::Standard:
    case ModelKind::Binary:
      return (1.0 - inst.model().discount) * inst.cost(i);
  }
  return inst.cost(i);
}

inline double principal_cost_share(const Instance& inst, int i,
                                   const std::vector<double>* division = nullptr,
                                   std::optional<double> discount = std::nullopt) {
  const double d = discount.value_or(inst.model().discount);
  switch (inst.model().kind) {
    case ModelKind::FreeAgent:
      return (1.0 - d) * inst.cost(i);
    case ModelKind::SharedCost: {
      double agent = inst.cost(i);
      if (division)
        agent = (*division)[i];
      else if (inst.model().cost_division)
        agent = (*inst.model().cost_division)[i];
      return inst.cost(i) - agent;
    }
    case ModelKind::Standard:
    case ModelKind::Binary:
      return (1.0 - d) * inst.cost(i);
  }
  return inst.cost(i);
}

}  // namespace pandora
