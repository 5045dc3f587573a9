#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pandora/common.hpp"
#include "pandora/family.hpp"
#include "pandora/instance.hpp"
#include "pandora/ocrs.hpp"
#include "pandora/solvers.hpp"

namespace pandora {

struct Provenance {
  std::string constructor;
  std::vector<std::pair<std::string, std::string>> params;
  std::uint64_t seed = 0;
};

// Single-proposal mechanism: the acceptable set R is "element set lies in the
// whitelisted sub-family and every member outcome clears its threshold rule".
struct SingleProposalMechanism {
  GreedyFamily family;
  // Agent cost shares announced with the mechanism (shared-cost model).
  std::optional<std::vector<double>> cost_division;
  // Discount applied to the principal's probing cost when evaluating the
  // delegated utility (the bicriteria measure); 0 means undiscounted.
  double eval_discount = 0.0;
  // Guarantee factor recorded by the constructor, 0 when none.
  double alpha = 0.0;
  Provenance prov;

  bool accepts(const Instance& inst, const RealizationProfile& prof,
               const std::vector<int>& ids) const {
    if (ids.empty()) return true;
    if (!family.feasible_sub(ids)) return false;
    for (int i : ids)
      if (!family.value_passes(i, realized_x(inst, prof, i), prof.tag[i]))
        return false;
    return true;
  }
};

// ---------------------------------------------------------------------------
// A flattened per-element view of (instance x mechanism) that the agent
// engines work against. Each element's outcome list is the atom list split at
// the threshold atom when the rule has fractional q, so exact enumeration
// over outcomes covers the tag randomness.

struct OutcomeCase {
  int atom = 0;
  double tag = 0.5;
  double p = 0.0;
  bool acceptable = false;
  double x = 0.0;
  double y = 0.0;
};

struct MechanismView {
  std::vector<std::vector<OutcomeCase>> cases;
  std::vector<char> whitelist;
  std::vector<double> agent_share;
  std::vector<double> principal_share;
  const ConstraintOracle* sub = nullptr;
  std::vector<char> sub_mask;

  bool feasible(const std::vector<int>& ids) const {
    for (int i : ids)
      if (!sub_mask[i]) return false;
    return sub->is_feasible(ids);
  }
};

inline MechanismView make_view(const Instance& inst,
                               const SingleProposalMechanism& mech) {
  const int n = inst.size();
  MechanismView view;
  view.cases.resize(n);
  view.whitelist = mech.family.whitelist;
  view.sub = &mech.family.sub;
  view.sub_mask = mech.family.whitelist;
  view.agent_share.resize(n);
  view.principal_share.resize(n);
  const std::vector<double>* division =
      mech.cost_division ? &*mech.cost_division : nullptr;
  for (int i = 0; i < n; ++i) {
    view.agent_share[i] = agent_cost_share(inst, i, division);
    view.principal_share[i] = principal_cost_share(inst, i, division, mech.eval_discount);
    const auto& atoms = inst.element(i).dist.atoms();
    const auto& rule = mech.family.rules[i];
    for (std::size_t a = 0; a < atoms.size(); ++a) {
      const bool at_threshold =
          mech.family.in_whitelist(i) &&
          close(mech.family.truncated(i, atoms[a].x), rule.t) && rule.q > 0.0 &&
          rule.q < 1.0;
      if (at_threshold) {
        view.cases[i].push_back({static_cast<int>(a), rule.q / 2.0,
                                 atoms[a].p * rule.q, true, atoms[a].x, atoms[a].y});
        view.cases[i].push_back({static_cast<int>(a), (1.0 + rule.q) / 2.0,
                                 atoms[a].p * (1.0 - rule.q), false, atoms[a].x,
                                 atoms[a].y});
      } else {
        const bool acc = mech.family.value_passes(i, atoms[a].x, 0.5);
        view.cases[i].push_back(
            {static_cast<int>(a), 0.5, atoms[a].p, acc, atoms[a].x, atoms[a].y});
      }
    }
  }
  return view;
}

// ---------------------------------------------------------------------------
// Constructors

namespace detail {

// Scale lambda in [1/2, 1] so that lambda * p stays in the half polytope but
// acceptance masses are as generous as the polytope allows. Lifting only
// helps: selectability needs the half polytope, the value chain is monotone
// in the active mass.
inline double half_polytope_lift(const ConstraintOracle& oracle,
                                 const std::vector<double>& p) {
  double lift = 2.0;
  double peak = 0.0;
  for (double v : p) peak = std::max(peak, v);
  if (peak > 0.0) lift = std::min(lift, 0.5 / peak);
  switch (oracle.kind()) {
    case ConstraintKind::KUniform: {
      double total = 0.0;
      for (double v : p) total += v;
      if (total > 0.0) lift = std::min(lift, 0.5 * oracle.uniform_k() / total);
      break;
    }
    case ConstraintKind::Partition: {
      std::vector<double> sums(oracle.caps().size(), 0.0);
      for (std::size_t i = 0; i < p.size(); ++i)
        sums[oracle.block_of(static_cast<int>(i))] += p[i];
      for (std::size_t b = 0; b < sums.size(); ++b)
        if (sums[b] > 0.0)
          lift = std::min(lift, 0.5 * oracle.caps()[b] / sums[b]);
      break;
    }
    default:
      return 0.5;
  }
  return std::max(0.5, std::min(1.0, lift));
}

// Raises active masses toward full coverage of the cap atom while the scaled
// polytope budget allows. An active level strictly inside the cap atom gates
// the whole upper tail by the tag and forfeits part of the cost recovery;
// reaching the atom's full mass removes the gate.
inline void coverage_lift(const Instance& inst, const CapValues& caps,
                          std::vector<double>& active, double scale) {
  const auto& oracle = inst.constraint();
  const int n = inst.size();
  std::vector<int> order;
  for (int i = 0; i < n; ++i)
    if (active[i] > 0.0) order.push_back(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (caps.tau_x[a] != caps.tau_x[b]) return caps.tau_x[a] > caps.tau_x[b];
    return a < b;
  });
  const auto target = [&](int i) {
    const auto z = zmin_marginal(inst, caps, i);
    return z.mass_at(z.max_value());
  };
  switch (oracle.kind()) {
    case ConstraintKind::KUniform:
    case ConstraintKind::Partition: {
      const bool uniform = oracle.kind() == ConstraintKind::KUniform;
      const std::size_t nblocks = uniform ? 1 : oracle.caps().size();
      std::vector<double> room(nblocks);
      for (std::size_t b = 0; b < nblocks; ++b)
        room[b] = scale * (uniform ? oracle.uniform_k() : oracle.caps()[b]);
      for (int i = 0; i < n; ++i)
        room[uniform ? 0 : oracle.block_of(i)] -= active[i];
      for (int i : order) {
        const int b = uniform ? 0 : oracle.block_of(i);
        const double add =
            std::min({target(i) - active[i], room[b], 1.0 - active[i]});
        if (add <= 0.0) continue;
        active[i] += add;
        room[b] -= add;
      }
      return;
    }
    case ConstraintKind::Knapsack: {
      double room = scale * oracle.budget();
      for (int i = 0; i < n; ++i) room -= active[i] * oracle.sizes()[i];
      for (int i : order) {
        const double sz = std::max(oracle.sizes()[i], 1e-12);
        const double add =
            std::min({target(i) - active[i], room / sz, 1.0 - active[i]});
        if (add <= 0.0) continue;
        active[i] += add;
        room -= add * sz;
      }
      return;
    }
    default:
      return;
  }
}

inline double masked_surrogate_exact(const Instance& inst, const CapValues& caps,
                                     const std::vector<char>& mask,
                                     double guard = 1e6) {
  double total = 0.0;
  enumerate_atom_profiles(
      inst,
      [&](const RealizationProfile& prof, double p) {
        std::vector<double> z(inst.size());
        for (int i = 0; i < inst.size(); ++i)
          z[i] = mask[i] ? truncated_value_x(inst, caps, prof, i) : -1.0;
        total += p * inst.constraint().max_weight(z).second;
      },
      guard);
  return total;
}

inline double masked_surrogate(const Instance& inst, const CapValues& caps,
                               const std::vector<char>& mask, std::size_t samples,
                               RngStream rng, double exact_guard = 1e6) {
  double combos = 1.0;
  for (int i = 0; i < inst.size(); ++i)
    combos *= inst.element(i).dist.support_size();
  if (combos <= exact_guard) return masked_surrogate_exact(inst, caps, mask, exact_guard + 1);
  double total = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    const RealizationProfile prof = sample_profile(inst, rng);
    std::vector<double> z(inst.size());
    for (int i = 0; i < inst.size(); ++i)
      z[i] = mask[i] ? truncated_value_x(inst, caps, prof, i) : -1.0;
    total += inst.constraint().max_weight(z).second;
  }
  return total / static_cast<double>(samples);
}

// E[Y_i * 1{outcome of i clears its rule}]: what probing i is worth to the
// agent through the acceptance gate.
inline double gated_agent_value(const Instance& inst, const GreedyFamily& fam, int i) {
  if (!fam.in_whitelist(i)) return 0.0;
  double d = 0.0;
  for (const auto& a : inst.element(i).dist.atoms()) {
    const double zv = fam.truncated(i, a.x);
    if (zv > fam.rules[i].t + kTol)
      d += a.p * a.y;
    else if (close(zv, fam.rules[i].t))
      d += a.p * fam.rules[i].q * a.y;
  }
  return d;
}

}  // namespace detail

// Binary-model matroid mechanism. Acceptance masses are allocated greedily
// by cap value inside the half polytope, but each kept element must receive
// at least the mass that makes probing worthwhile for the agent (gated value
// y_i p_i q_i above the cost); elements whose participation floor no longer
// fits are dropped rather than starved into being skipped.
inline SingleProposalMechanism build_binary_matroid(const Instance& inst,
                                                    const CapValues& caps) {
  if (inst.model().kind != ModelKind::Binary)
    throw ModelMismatchError("binary matroid mechanism needs the binary model");
  const auto kind = inst.constraint().kind();
  if (kind != ConstraintKind::KUniform && kind != ConstraintKind::Partition)
    throw UnsupportedConstraintError(
        "binary mechanism is built on the uniform/partition OCRS layer");
  const int n = inst.size();
  const auto p_star = ex_ante_membership(inst, caps, 0, RngStream(0), true, 1e6).p;

  const auto block_of = [&](int i) {
    return kind == ConstraintKind::KUniform ? 0 : inst.constraint().block_of(i);
  };
  const std::size_t nblocks =
      kind == ConstraintKind::KUniform ? 1 : inst.constraint().caps().size();
  std::vector<double> room(nblocks);
  for (std::size_t b = 0; b < nblocks; ++b)
    room[b] = 0.5 * (kind == ConstraintKind::KUniform
                         ? inst.constraint().uniform_k()
                         : inst.constraint().caps()[b]);

  std::vector<std::vector<int>> members(nblocks);
  for (int i = 0; i < n; ++i)
    if (p_star[i] > 0.0) members[block_of(i)].push_back(i);
  for (auto& m : members)
    std::sort(m.begin(), m.end(), [&](int a, int b) {
      if (caps.tau_x[a] != caps.tau_x[b]) return caps.tau_x[a] > caps.tau_x[b];
      return a < b;
    });

  const auto atom_mass = [&](int i) { return inst.element(i).dist.atoms().back().p; };

  // Whole atoms only: fractional gates would make the principal recover only
  // part of the probing cost it still pays in full. A kept element needs its
  // rivals' combined mass within half the block capacity; subject to that,
  // pick the most valuable subset (exact scan on small blocks, cap-order
  // prefixes beyond).
  std::vector<double> active(n, 0.0);
  for (std::size_t b = 0; b < nblocks; ++b) {
    const auto& mem = members[b];
    const double cap_mass = room[b];  // half the block capacity
    std::vector<int> best_set;
    double best_value = 0.0;
    const auto consider = [&](const std::vector<int>& subset) {
      double total = 0.0, minmass = 2.0, value = 0.0;
      for (int j : subset) {
        total += atom_mass(mem[j]);
        minmass = std::min(minmass, atom_mass(mem[j]));
        value += caps.tau_x[mem[j]] * atom_mass(mem[j]);
      }
      if (subset.size() > 1 && total - minmass > cap_mass + kProbTol) return;
      if (value > best_value + kProbTol) {
        best_value = value;
        best_set = subset;
      }
    };
    if (mem.size() <= 16) {
      for (std::uint32_t mask = 1; mask < (1u << mem.size()); ++mask) {
        std::vector<int> subset;
        for (std::size_t j = 0; j < mem.size(); ++j)
          if (mask & (1u << j)) subset.push_back(static_cast<int>(j));
        consider(subset);
      }
    } else {
      std::vector<int> prefix;
      for (std::size_t j = 0; j < mem.size(); ++j) {
        prefix.push_back(static_cast<int>(j));
        consider(prefix);
      }
    }
    for (int j : best_set) active[mem[j]] = atom_mass(mem[j]);
  }

  SingleProposalMechanism mech;
  mech.family = build_greedy_ocrs(inst, caps, active);
  mech.alpha = 0.25;
  mech.prov.constructor = "binary_matroid";
  return mech;
}

// k-uniform free-agent mechanism: one global threshold T with per-element
// tag probabilities hitting Pr[#{i : Z_i^min >= (T,q_i)} >= k] = delta
// exactly; whitelist is the elements whose cap reaches T. Gating an atom at
// an element's own cap forfeits part of that element's cost recovery, so the
// tag mass is steered to atoms strictly below the cap first and the feasible
// T with the smallest forfeit wins.
inline SingleProposalMechanism build_free_agent_kuniform(const Instance& inst,
                                                         const CapValues& caps,
                                                         double delta) {
  if (inst.model().kind != ModelKind::FreeAgent)
    throw ModelMismatchError("k-uniform threshold mechanism needs the free-agent model");
  if (inst.constraint().kind() != ConstraintKind::KUniform)
    throw UnsupportedConstraintError("this mechanism needs a k-uniform constraint");
  const int n = inst.size();
  const int k = inst.constraint().uniform_k();
  if (delta < 0.0 || delta > 0.5 + kTol)
    throw BadParametersError("delta must lie in [0, 1/2]");

  std::vector<DiscreteMarginal> z(n);
  for (int i = 0; i < n; ++i) z[i] = zmin_marginal(inst, caps, i);

  // Pr[#actives >= k] via the Poisson binomial recurrence.
  const auto count_prob = [&](double t, const std::vector<double>& q) {
    std::vector<double> tail(k + 1, 0.0);
    tail[0] = 1.0;
    double at_least_k = 0.0;
    for (int i = 0; i < n; ++i) {
      const double a = z[i].upper_mass(t) + q[i] * z[i].mass_at(t);
      for (int j = k; j-- > 0;) {
        const double moved = tail[j] * a;
        tail[j] -= moved;
        if (j + 1 == k)
          at_least_k += moved;
        else
          tail[j + 1] += moved;
      }
    }
    return at_least_k;
  };

  SingleProposalMechanism mech;
  mech.eval_discount = delta;
  mech.alpha = delta;
  mech.prov.constructor = "free_agent_k_uniform";
  mech.prov.params.emplace_back("delta", std::to_string(delta));
  mech.family.sub = inst.constraint();
  mech.family.whitelist.assign(n, 0);
  mech.family.rules.assign(n, {0.0, 0.0});
  mech.family.zcap = caps.tau_x;

  if (k > n || count_prob(0.0, std::vector<double>(n, 1.0)) < delta - kProbTol)
    throw InfeasibleDeltaError("no threshold reaches the requested delta");

  if (delta <= 0.0) {
    double top = 0.0;
    for (int i = 0; i < n; ++i) top = std::max(top, z[i].max_value());
    for (int i = 0; i < n; ++i) mech.family.rules[i] = {top + 1.0, 0.0};
    return mech;
  }

  std::vector<double> cand;
  for (int i = 0; i < n; ++i)
    for (double v : z[i].values()) cand.push_back(v);
  cand.push_back(0.0);
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end(),
                         [](double a, double b) { return close(a, b); }),
             cand.end());

  // Provable floor of the delegated value for a rule set at threshold T:
  // count_prob * kT for the high-count event, the per-element tails (minus
  // the recovery forfeited by gating cap atoms) weighted by the low-count
  // probability, minus the discounted whitelist cost.
  const auto floor_bound = [&](double T, const std::vector<double>& q) {
    const double hit = count_prob(T, q);
    double tails = 0.0, cost = 0.0;
    for (int i = 0; i < n; ++i) {
      if (caps.tau_x[i] < T - kTol) continue;  // off the whitelist
      tails += inst.element(i).dist.marginal_x().expected_excess(T);
      if (close(caps.tau_x[i], T)) tails -= (1.0 - q[i]) * inst.cost(i);
      cost += inst.cost(i);
    }
    return hit * k * T + (1.0 - hit) * tails - (1.0 - delta) * cost;
  };

  double best_T = cand.front();
  std::vector<double> best_q(n, 1.0);
  double best_floor = -std::numeric_limits<double>::infinity();
  const auto offer = [&](double T, const std::vector<double>& q) {
    const double f = floor_bound(T, q);
    if (f > best_floor + kProbTol) {
      best_floor = f;
      best_T = T;
      best_q = q;
    }
  };
  for (std::size_t c = cand.size(); c-- > 0;) {
    const double T = cand[c];
    // Full-atom variant: exceeds delta, floor still valid.
    offer(T, std::vector<double>(n, 1.0));
    // Exact-split variant when the count can be pinned to delta: drain tag
    // mass loss-free first (atoms strictly below the element's cap), then
    // all cap atoms together by a shared factor.
    std::vector<double> q(n, 1.0);
    if (count_prob(T, q) < delta - kProbTol) continue;
    if (count_prob(T, std::vector<double>(n, 0.0)) > delta + kProbTol) continue;
    std::vector<int> below, at_cap;
    for (int i = 0; i < n; ++i) {
      if (z[i].mass_at(T) <= 0.0) continue;
      (close(caps.tau_x[i], T) ? at_cap : below).push_back(i);
    }
    bool need_cap_drain = true;
    for (int i : below) {
      q[i] = 0.0;
      if (count_prob(T, q) >= delta - kProbTol) continue;
      double lo = 0.0, hi = 1.0;
      for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        q[i] = mid;
        if (count_prob(T, q) < delta)
          lo = mid;
        else
          hi = mid;
      }
      q[i] = hi;
      need_cap_drain = false;
      break;
    }
    if (need_cap_drain && count_prob(T, q) > delta + kProbTol && !at_cap.empty()) {
      double lo = 0.0, hi = 1.0;
      for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        for (int i : at_cap) q[i] = mid;
        if (count_prob(T, q) < delta)
          lo = mid;
        else
          hi = mid;
      }
      for (int i : at_cap) q[i] = hi;
    }
    offer(T, q);
  }
  for (int i = 0; i < n; ++i) {
    mech.family.rules[i] = {best_T, best_q[i]};
    mech.family.whitelist[i] = caps.tau_x[i] >= best_T - kTol ? 1 : 0;
  }
  mech.prov.params.emplace_back("T", std::to_string(best_T));
  mech.prov.params.emplace_back("floor", std::to_string(best_floor));
  return mech;
}

// OCRS-backed free-agent mechanism: actives at b * p*, thresholds at their
// quantiles, the greedy family as the inner sub-family, and the bicriteria
// discount 1 - alpha recorded for evaluation.
inline SingleProposalMechanism build_free_agent_ocrs(
    const Instance& inst, const CapValues& caps, const std::vector<double>& p_star,
    std::optional<KnapsackClass> cls = std::nullopt) {
  if (inst.model().kind != ModelKind::FreeAgent)
    throw ModelMismatchError("OCRS delegation mechanism needs the free-agent model");
  const auto kind = inst.constraint().kind();
  SingleProposalMechanism mech;
  double alpha = 0.0;
  std::vector<double> active(p_star.size());
  if (kind == ConstraintKind::KUniform || kind == ConstraintKind::Partition) {
    alpha = 0.25;
    const double lift = detail::half_polytope_lift(inst.constraint(), p_star);
    for (std::size_t i = 0; i < p_star.size(); ++i) active[i] = lift * p_star[i];
    detail::coverage_lift(inst, caps, active, 0.5);
    mech.family = build_greedy_ocrs(inst, caps, active);
  } else if (kind == ConstraintKind::Knapsack) {
    alpha = 1.5 - std::sqrt(2.0);
    const double b = 1.0 - 1.0 / std::sqrt(2.0);
    for (std::size_t i = 0; i < p_star.size(); ++i) active[i] = b * p_star[i];
    detail::coverage_lift(inst, caps, active, b);
    if (!cls) cls = KnapsackClass::Small;
    mech.family = build_greedy_ocrs(inst, caps, active, cls);
  } else {
    throw UnsupportedConstraintError("OCRS delegation for this constraint kind");
  }
  // Elements with no ex-ante mass are rejected outright.
  for (std::size_t i = 0; i < p_star.size(); ++i)
    if (p_star[i] <= 0.0) mech.family.whitelist[i] = 0;
  mech.alpha = alpha;
  mech.eval_discount = 1.0 - alpha;
  mech.prov.constructor = "free_agent_ocrs";
  if (cls)
    mech.prov.params.emplace_back(
        "class", *cls == KnapsackClass::Big ? "big" : "small");
  return mech;
}

// Shared-cost mechanism: concave ex-ante optimum, thresholds, the cost
// division d_i = E[Y_i * 1{X_i clears t_i}], and the two-sided split between
// elements the agent can be made exactly indifferent on (E1) and elements
// that pay for themselves (E2).
inline SingleProposalMechanism build_shared_cost(const Instance& inst,
                                                 const CapValues& caps,
                                                 std::uint64_t seed = 0,
                                                 std::size_t side_samples = 4096) {
  if (inst.model().kind != ModelKind::SharedCost)
    throw ModelMismatchError("shared-cost mechanism needs the shared-cost model");
  const int n = inst.size();
  const auto kind = inst.constraint().kind();
  const bool knap = kind == ConstraintKind::Knapsack;
  const double b = knap ? 1.0 - 1.0 / std::sqrt(2.0) : 0.5;
  const double alpha = knap ? 1.5 - std::sqrt(2.0) : 0.25;

  const auto family_at = [&](const std::vector<double>& p,
                             std::optional<KnapsackClass> cls) {
    std::vector<double> active(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) active[i] = b * p[i];
    detail::coverage_lift(inst, caps, active, b);
    return build_greedy_ocrs(inst, caps, active, cls);
  };
  std::optional<KnapsackClass> cls;
  if (knap) cls = (seed % 2 == 0) ? KnapsackClass::Small : KnapsackClass::Big;

  const std::vector<double> p0 = ex_ante_concave(inst, caps);
  const GreedyFamily fam0 = family_at(p0, cls);

  // First-pass cost division decides the side split.
  std::vector<char> e1(n, 0), e2(n, 0);
  for (int i = 0; i < n; ++i) {
    const double d = detail::gated_agent_value(inst, fam0, i);
    if (d <= inst.cost(i) + kTol)
      e1[i] = 1;
    else
      e2[i] = 1;
  }
  const double s1 = detail::masked_surrogate(inst, caps, e1, side_samples,
                                             RngStream(seed, 11));
  const double s2 = detail::masked_surrogate(inst, caps, e2, side_samples,
                                             RngStream(seed, 12));
  const std::vector<char>& side = (s1 >= s2) ? e1 : e2;

  // Rebuild the ex-ante point and thresholds on the chosen side.
  const std::vector<double> p = ex_ante_concave(inst, caps, &side);
  SingleProposalMechanism mech;
  mech.family = family_at(p, cls);
  for (int i = 0; i < n; ++i)
    if (!side[i]) mech.family.whitelist[i] = 0;

  std::vector<double> division(n);
  for (int i = 0; i < n; ++i) {
    if (!mech.family.whitelist[i]) {
      division[i] = inst.cost(i);
      continue;
    }
    const double d = detail::gated_agent_value(inst, mech.family, i);
    division[i] = std::min(d, inst.cost(i));
  }
  mech.cost_division = division;
  mech.alpha = alpha / 2.0;
  mech.prov.constructor = "shared_cost";
  mech.prov.seed = seed;
  mech.prov.params.emplace_back("side", (s1 >= s2) ? "e1" : "e2");
  mech.prov.params.emplace_back("surrogate_e1", std::to_string(s1));
  mech.prov.params.emplace_back("surrogate_e2", std::to_string(s2));
  if (cls)
    mech.prov.params.emplace_back(
        "class", *cls == KnapsackClass::Big ? "big" : "small");
  return mech;
}

}  // namespace pandora
