#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "pandora/agents.hpp"
#include "pandora/common.hpp"
#include "pandora/instance.hpp"
#include "pandora/mechanisms.hpp"
#include "pandora/symmetric.hpp"

namespace pandora {

enum class FamilyId {
  StdImpossibility,
  FreeAgentImpossibility,
  DiscountedImpossibility,
  SharedCostHalfGap,
  AgentAgnosticImpossibility,
  RandomMatroid,
  RandomKnapsack
};

inline const char* to_string(FamilyId f) {
  switch (f) {
    case FamilyId::StdImpossibility: return "std_impossibility";
    case FamilyId::FreeAgentImpossibility: return "free_agent_impossibility";
    case FamilyId::DiscountedImpossibility: return "discounted_impossibility";
    case FamilyId::SharedCostHalfGap: return "shared_cost_half_gap";
    case FamilyId::AgentAgnosticImpossibility: return "agent_agnostic_impossibility";
    case FamilyId::RandomMatroid: return "random_matroid";
    case FamilyId::RandomKnapsack: return "random_knapsack";
  }
  return "?";
}

inline bool family_from_string(const std::string& s, FamilyId& out) {
  for (FamilyId f :
       {FamilyId::StdImpossibility, FamilyId::FreeAgentImpossibility,
        FamilyId::DiscountedImpossibility, FamilyId::SharedCostHalfGap,
        FamilyId::AgentAgnosticImpossibility, FamilyId::RandomMatroid,
        FamilyId::RandomKnapsack}) {
    if (s == to_string(f)) {
      out = f;
      return true;
    }
  }
  return false;
}

struct FamilySpec {
  FamilyId id = FamilyId::StdImpossibility;
  int n = 4;
  double eps = -1.0;   // family default when negative
  double delta = -1.0;
  std::uint64_t seed = 0;
  double sentinel = 1e9;
  // Elements given a positive cost share by the mechanism under test; the
  // agent-agnostic family's adversarial agent values depend on this.
  std::vector<int> positive_division;
};

namespace detail {

inline bool is_perfect_square(int n, int& root) {
  root = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
  return root * root == n;
}

inline bool is_perfect_fourth(int n, int& root) {
  root = static_cast<int>(std::lround(std::pow(static_cast<double>(n), 0.25)));
  return root * root * root * root == n;
}

}  // namespace detail

// Random instance helpers shared by tests and the random families. Values
// are small half-integers and probabilities small rationals so that exact
// enumeration stays clean; costs keep both participation margins.
inline FiniteJointDistribution random_joint(RngStream& rng, int support) {
  for (;;) {
    std::vector<JointAtom> atoms;
    std::vector<int> w(support);
    int total = 0;
    for (int a = 0; a < support; ++a) {
      w[a] = rng.uniform_int(1, 8);
      total += w[a];
    }
    for (int a = 0; a < support; ++a) {
      atoms.push_back({rng.uniform_int(0, 16) / 2.0, rng.uniform_int(0, 16) / 2.0,
                       static_cast<double>(w[a]) / total});
    }
    FiniteJointDistribution dist(std::move(atoms));
    if (dist.mean_x() > 0.25 && dist.mean_y() > 0.25 &&
        dist.support_size() >= 2)
      return dist;
  }
}

inline ConstraintOracle random_matroid_constraint(RngStream& rng, int n) {
  if (rng.next_unit() < 0.5) return ConstraintOracle::k_uniform(n, rng.uniform_int(1, std::max(1, n / 2 + 1)));
  std::vector<std::vector<int>> blocks;
  std::vector<int> caps;
  std::vector<int> ids(n);
  std::iota(ids.begin(), ids.end(), 0);
  // Random contiguous blocks with random caps.
  int start = 0;
  while (start < n) {
    const int len = std::min(n - start, rng.uniform_int(1, 3));
    std::vector<int> block;
    for (int i = start; i < start + len; ++i) block.push_back(i);
    blocks.push_back(block);
    caps.push_back(rng.uniform_int(1, len));
    start += len;
  }
  return ConstraintOracle::partition(n, blocks, caps);
}

inline Instance random_instance(RngStream& rng, int n, ConstraintOracle oracle,
                                UtilityModel model, int max_support = 3) {
  std::vector<Element> elems;
  for (int i = 0; i < n; ++i) {
    Element e;
    e.id = i;
    e.dist = random_joint(rng, rng.uniform_int(2, max_support));
    const double margin = std::min(e.dist.mean_x(), e.dist.mean_y());
    e.cost = rng.uniform(0.15, 0.6) * margin;
    elems.push_back(std::move(e));
  }
  return Instance(std::move(elems), std::move(oracle), std::move(model));
}

// Finer-grained variant: more atoms on a denser value grid with moderate
// costs, the regime in which single atoms carry little of the quantile mass.
inline Instance random_instance_fine(RngStream& rng, int n, ConstraintOracle oracle,
                                     UtilityModel model) {
  std::vector<Element> elems;
  for (int i = 0; i < n; ++i) {
    Element e;
    e.id = i;
    for (;;) {
      const int support = rng.uniform_int(3, 5);
      std::vector<JointAtom> atoms;
      std::vector<int> w(support);
      int total = 0;
      for (auto& x : w) total += (x = rng.uniform_int(1, 9));
      for (int a = 0; a < support; ++a)
        atoms.push_back({rng.uniform_int(0, 40) / 4.0, rng.uniform_int(0, 40) / 4.0,
                         static_cast<double>(w[a]) / total});
      e.dist = FiniteJointDistribution(std::move(atoms));
      if (e.dist.mean_x() > 0.5 && e.dist.mean_y() > 0.5 &&
          e.dist.support_size() >= 3)
        break;
    }
    e.cost = rng.uniform(0.1, 0.45) * std::min(e.dist.mean_x(), e.dist.mean_y());
    elems.push_back(std::move(e));
  }
  return Instance(std::move(elems), std::move(oracle), std::move(model));
}

inline Instance random_binary_partition_instance(RngStream& rng, int n) {
  std::vector<Element> elems;
  for (int i = 0; i < n; ++i) {
    const double p = rng.uniform_int(3, 18) / 20.0;
    const double x = rng.uniform_int(1, 20) / 2.0;
    const double y = rng.uniform_int(1, 20) / 2.0;
    const double c = rng.uniform(0.1, 0.7) * p * std::min(x, y);
    Element e;
    e.id = i;
    e.dist = FiniteJointDistribution({{x, y, p}, {0.0, 0.0, 1.0 - p}});
    e.cost = c;
    elems.push_back(std::move(e));
  }
  RngStream block_rng = rng.substream(1);
  UtilityModel model;
  model.kind = ModelKind::Binary;
  ConstraintOracle oracle = random_matroid_constraint(block_rng, n);
  return Instance(std::move(elems), std::move(oracle), model);
}

inline Instance random_knapsack_instance(RngStream& rng, int n,
                                         UtilityModel model, int max_support = 3) {
  std::vector<double> sizes(n);
  for (auto& s : sizes) s = rng.uniform_int(8, 56) / 64.0;
  return random_instance(rng, n, ConstraintOracle::knapsack(sizes, 1.0), model,
                         max_support);
}

// ---------------------------------------------------------------------------
// Named instance families. Unbounded magnitudes in the constructions are
// replaced by a finite sentinel and continuous parts by two-point laws that
// keep the conditional means; the orderings the analyses rely on are asserted
// at build time.

inline Instance generate_family(const FamilySpec& spec) {
  const int n = spec.n;
  switch (spec.id) {
    case FamilyId::StdImpossibility:
    case FamilyId::DiscountedImpossibility: {
      if (n < 2) throw BadParametersError("family needs n >= 2");
      double eps = spec.eps;
      double discount = 0.0;
      double mval = 0.0;
      if (spec.id == FamilyId::StdImpossibility) {
        if (eps <= 0.0) eps = 1.0 / (2.0 * n);
        if (eps >= 1.0) throw BadParametersError("eps must lie in (0,1)");
        mval = std::ceil(static_cast<double>(n) / eps);
      } else {
        int root = 0;
        if (!detail::is_perfect_square(n, root))
          throw BadParametersError("discounted family needs a perfect square n");
        eps = 1.0 / std::pow(static_cast<double>(n), 0.25);
        mval = root;
        discount = 1.0 - 1.0 / root;
      }
      const double c = 1.0 - eps;
      const double px = 1.0 / n, py = 1.0 / mval;
      std::vector<Element> elems;
      for (int i = 0; i < n; ++i) {
        Element e;
        e.id = i;
        e.dist = FiniteJointDistribution({{static_cast<double>(n), mval, px * py},
                                          {static_cast<double>(n), 0.0, px * (1 - py)},
                                          {0.0, mval, (1 - px) * py},
                                          {0.0, 0.0, (1 - px) * (1 - py)}});
        e.cost = c;
        elems.push_back(std::move(e));
      }
      UtilityModel model;
      model.kind = ModelKind::Standard;
      model.discount = discount;
      Instance inst(std::move(elems), ConstraintOracle::k_uniform(n, 1), model);
      // Build-time checks: participation, the cap closed form, and (inside
      // the canonical parameter range) the k-element fallback inequality.
      if (!(inst.element(0).dist.mean_x() > c))
        throw BadParametersError("participation violated");
      if (eps <= 1.0 / (2.0 * n) + kTol) {
        for (int k = 1; k <= n; ++k) {
          const double fall =
              n * (1.0 - std::pow(1.0 - 1.0 / n, k)) - k * (1.0 - eps);
          if (fall > eps + 1e-6)
            throw BadParametersError("fallback inequality violated at k=" +
                                     std::to_string(k));
        }
      }
      return inst;
    }
    case FamilyId::FreeAgentImpossibility: {
      int root = 0;
      if (!detail::is_perfect_fourth(n, root))
        throw BadParametersError("free-agent family needs a perfect fourth power n");
      const double p = 1.0 / root;
      const double high = 1.0 / (p * p);
      const double c = 1.0 - p / 2.0;
      std::vector<Element> elems;
      for (int i = 0; i < n; ++i) {
        const double small = 1e-6 * (1 + i);
        Element e;
        e.id = i;
        e.dist = FiniteJointDistribution({{high, small, p * p / 2},
                                          {high, spec.sentinel, p * p / 2},
                                          {0.0, small, (1 - p * p) / 2},
                                          {0.0, spec.sentinel, (1 - p * p) / 2}});
        e.cost = c;
        elems.push_back(std::move(e));
      }
      if (!(spec.sentinel > high))
        throw BadParametersError("sentinel must dominate the principal values");
      UtilityModel model;
      model.kind = ModelKind::FreeAgent;
      return Instance(std::move(elems), ConstraintOracle::k_uniform(n, 1), model);
    }
    case FamilyId::SharedCostHalfGap: {
      double eps = spec.eps;
      if (eps <= 0.0) eps = 0.1;
      if (eps >= 0.5) throw BadParametersError("eps must be small");
      std::vector<Element> elems(2);
      elems[0].id = 0;
      elems[0].dist = FiniteJointDistribution(
          {{1.0 / eps, 1.0 - eps, eps * eps},
           {1.0 / eps, 0.0, eps * (1.0 - eps)},
           {0.0, 1.0 - eps, (1.0 - eps) * eps},
           {0.0, 0.0, (1.0 - eps) * (1.0 - eps)}});
      elems[0].cost = eps * eps;
      elems[1].id = 1;
      elems[1].dist = FiniteJointDistribution({{1.0, 1.0, 1.0}});
      elems[1].cost = eps * eps;
      UtilityModel model;
      model.kind = ModelKind::SharedCost;
      return Instance(std::move(elems), ConstraintOracle::k_uniform(2, 1), model);
    }
    case FamilyId::AgentAgnosticImpossibility: {
      int root = 0;
      if (!detail::is_perfect_fourth(n, root) || n < 16)
        throw BadParametersError(
            "agent-agnostic family needs a perfect fourth power n >= 16");
      const double sq = std::sqrt(static_cast<double>(n));
      const double c = 1.0 - 2.0 / root;
      const double big = spec.sentinel;
      if (!(big > static_cast<double>(n) * n))
        throw BadParametersError("sentinel must dominate the planted agent value");
      std::vector<char> positive(n, 0);
      for (int i : spec.positive_division) positive[i] = 1;
      std::vector<Element> elems;
      for (int i = 0; i < n; ++i) {
        Element e;
        e.id = i;
        if (positive[i]) {
          // Agent sees almost nothing on good outcomes, a large prize on bad
          // ones; two-point split keeps E[Y | X] on each branch.
          e.dist = FiniteJointDistribution(
              {{sq, 0.0, 0.5 / sq},
               {sq, c / 2.0, 0.5 / sq},
               {0.0, static_cast<double>(n) * n, 1.0 - 1.0 / sq}});
        } else {
          e.dist = FiniteJointDistribution({{sq, big, 0.5 / sq},
                                            {sq, 3.0 * big, 0.5 / sq},
                                            {0.0, big, 0.5 * (1.0 - 1.0 / sq)},
                                            {0.0, 3.0 * big, 0.5 * (1.0 - 1.0 / sq)}});
        }
        e.cost = c;
        elems.push_back(std::move(e));
      }
      UtilityModel model;
      model.kind = ModelKind::SharedCost;
      return Instance(std::move(elems), ConstraintOracle::k_uniform(n, 1), model);
    }
    case FamilyId::RandomMatroid: {
      RngStream rng(spec.seed, 77);
      UtilityModel model;
      model.kind = ModelKind::FreeAgent;
      return random_instance(rng, n, random_matroid_constraint(rng, n), model);
    }
    case FamilyId::RandomKnapsack: {
      RngStream rng(spec.seed, 78);
      UtilityModel model;
      model.kind = ModelKind::FreeAgent;
      return random_knapsack_instance(rng, n, model);
    }
  }
  throw BadParametersError("unknown family");
}

// Closed-form E[OPT] of the named 1-uniform families (the cap value times
// the probability that some truncated value is positive).
inline double family_expected_opt(const FamilySpec& spec) {
  const double n = spec.n;
  switch (spec.id) {
    case FamilyId::StdImpossibility: {
      const double eps = spec.eps > 0 ? spec.eps : 1.0 / (2.0 * n);
      return eps * n * (1.0 - std::pow(1.0 - 1.0 / n, n));
    }
    case FamilyId::DiscountedImpossibility: {
      const double eps = 1.0 / std::pow(n, 0.25);
      return eps * n * (1.0 - std::pow(1.0 - 1.0 / n, n));
    }
    case FamilyId::FreeAgentImpossibility: {
      const double p = 1.0 / std::pow(n, 0.25);
      return 1.0 / (2.0 * p) * (1.0 - std::pow(1.0 - p * p, n));
    }
    case FamilyId::AgentAgnosticImpossibility: {
      const double root = std::pow(n, 0.25);
      return 2.0 * root * (1.0 - std::pow(1.0 - 1.0 / std::sqrt(n), n));
    }
    default:
      throw BadParametersError("no closed form for this family");
  }
}

// ---------------------------------------------------------------------------
// Brute-force search over deterministic single-proposal mechanisms given by
// per-element accepted-outcome patterns (1-uniform constraint), optionally
// crossed with a cost-division grid in the shared-cost model. Identical
// elements reduce to pattern multisets when symmetry is on.

struct BruteForceOptions {
  bool symmetry = true;
  TieBreak tie = TieBreak::FavorPrincipal;
  int division_steps = 16;
  double candidate_guard = 1e6;
  double dp_guard = 1e7;
};

struct BruteForceResult {
  double best_del = -std::numeric_limits<double>::infinity();
  std::vector<std::uint32_t> masks;     // accepted-atom bitmask per element
  std::vector<double> division;         // agent cost share per element
  std::size_t candidates = 0;
};

namespace detail {

inline MechanismView pattern_view(const Instance& inst,
                                  const std::vector<std::uint32_t>& masks,
                                  const std::vector<double>* division) {
  const int n = inst.size();
  MechanismView view;
  view.cases.resize(n);
  view.whitelist.assign(n, 0);
  view.sub_mask.assign(n, 0);
  view.sub = &inst.constraint();
  view.agent_share.resize(n);
  view.principal_share.resize(n);
  for (int i = 0; i < n; ++i) {
    view.whitelist[i] = masks[i] != 0;
    view.sub_mask[i] = masks[i] != 0;
    view.agent_share[i] = agent_cost_share(inst, i, division);
    view.principal_share[i] = principal_cost_share(inst, i, division);
    const auto& atoms = inst.element(i).dist.atoms();
    for (std::size_t a = 0; a < atoms.size(); ++a)
      view.cases[i].push_back({static_cast<int>(a), 0.5, atoms[a].p,
                               (masks[i] >> a & 1u) != 0, atoms[a].x, atoms[a].y});
  }
  return view;
}

}  // namespace detail

inline BruteForceResult brute_force_optimal_mechanism(
    const Instance& inst, const BruteForceOptions& opt = {}) {
  if (inst.constraint().kind() != ConstraintKind::KUniform ||
      inst.constraint().uniform_k() != 1)
    throw UnsupportedConstraintError("brute force covers 1-uniform constraints");
  const int n = inst.size();
  const bool shared = inst.model().kind == ModelKind::SharedCost;

  // Per-element candidate list: pattern mask (x division index).
  struct Cand {
    std::uint32_t mask;
    int div_idx;
  };
  std::vector<std::vector<Cand>> cands(n);
  for (int i = 0; i < n; ++i) {
    const std::uint32_t top = 1u << inst.element(i).dist.support_size();
    for (std::uint32_t m = 0; m < top; ++m) {
      if (shared) {
        for (int j = 0; j <= opt.division_steps; ++j) cands[i].push_back({m, j});
      } else {
        cands[i].push_back({m, 0});
      }
    }
  }

  // Group identical elements for the multiset reduction.
  std::vector<int> group(n, -1);
  std::vector<int> group_head;
  for (int i = 0; i < n; ++i) {
    for (std::size_t g = 0; g < group_head.size(); ++g) {
      const auto& a = inst.element(group_head[g]);
      const auto& b = inst.element(i);
      if (a.cost == b.cost && a.dist.atoms().size() == b.dist.atoms().size()) {
        bool same = true;
        for (std::size_t k = 0; k < a.dist.atoms().size(); ++k) {
          const auto &aa = a.dist.atoms()[k], &bb = b.dist.atoms()[k];
          if (!close(aa.x, bb.x) || !close(aa.y, bb.y) || !close(aa.p, bb.p)) {
            same = false;
            break;
          }
        }
        if (same) {
          group[i] = static_cast<int>(g);
          break;
        }
      }
    }
    if (group[i] < 0) {
      group[i] = static_cast<int>(group_head.size());
      group_head.push_back(i);
    }
  }

  double count_estimate = 1.0;
  if (opt.symmetry) {
    std::vector<int> gsize(group_head.size(), 0);
    for (int i = 0; i < n; ++i) ++gsize[group[i]];
    for (std::size_t g = 0; g < group_head.size(); ++g) {
      // C(M + s - 1, s) multisets of size s from M candidates.
      const double M = static_cast<double>(cands[group_head[g]].size());
      double ways = 1.0;
      for (int s = 1; s <= gsize[g]; ++s) ways = ways * (M + s - 1) / s;
      count_estimate *= ways;
    }
  } else {
    for (int i = 0; i < n; ++i) count_estimate *= cands[i].size();
  }
  if (count_estimate > opt.candidate_guard)
    throw TooLargeError("brute force candidate space exceeds guard");

  BruteForceResult result;
  std::vector<int> choice(n, 0);
  std::vector<std::uint32_t> masks(n);
  std::vector<double> division(n);
  const std::function<void(int)> rec = [&](int i) {
    if (i == n) {
      const std::vector<double>* div = shared ? &division : nullptr;
      const MechanismView view = detail::pattern_view(inst, masks, div);
      BestResponseDp dp(inst, view, opt.tie, opt.dp_guard);
      const auto v = dp.root();
      ++result.candidates;
      if (v.principal > result.best_del + kProbTol) {
        result.best_del = v.principal;
        result.masks = masks;
        result.division = division;
      }
      return;
    }
    int start = 0;
    if (opt.symmetry) {
      for (int j = 0; j < i; ++j)
        if (group[j] == group[i]) start = choice[j];
    }
    const auto& list = cands[i];
    for (int c = start; c < static_cast<int>(list.size()); ++c) {
      choice[i] = c;
      masks[i] = list[c].mask;
      division[i] =
          shared ? inst.cost(i) * list[c].div_idx / opt.division_steps : 0.0;
      rec(i + 1);
    }
  };
  rec(0);
  if (result.candidates == 0) result.best_del = 0.0;
  return result;
}

// ---------------------------------------------------------------------------
// Gap sweeps: per family size, the exact best delegated value over the
// family's reduced mechanism space against the exact closed-form optimum.

struct GapRow {
  std::string family;
  int n = 0;
  double e_opt = 0.0;
  double e_del = 0.0;
  double ratio = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  std::uint64_t seed = 0;
  double wall_ms = 0.0;
};

inline double fit_loglog_slope(const std::vector<GapRow>& rows) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(rows.size());
  for (const auto& r : rows) {
    const double x = std::log(static_cast<double>(r.n));
    const double y = std::log(std::max(r.ratio, 1e-300));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

namespace detail {

// Classes for the "accept the high outcome at every agent value, plus the
// fallback (high, 0) outcome" patterns of the identical-element families.
// P1 accepts the two agent-prize outcomes, P2 additionally the fallback.
inline SymClass std_family_class(int count, double n, double m, double c,
                                 double cost_scale, bool accept_fallback) {
  SymClass cl;
  cl.count = count;
  const double px = 1.0 / n, py = 1.0 / m;
  cl.outcomes = {
      {px * py, true, n, m},
      {px * (1 - py), accept_fallback, n, 0.0},
      {(1 - px) * py, true, 0.0, m},
      {(1 - px) * (1 - py), false, 0.0, 0.0},
  };
  cl.agent_share = cost_scale * c;
  cl.principal_share = cost_scale * c;
  return cl;
}

}  // namespace detail

// Best mechanism value over the reduced pattern space for one size of the
// standard/discounted hard family. Wide search over both pattern counts at
// small n, fallback-pattern count alone at large n (the fallback pattern
// dominates elementwise).
inline double std_family_best_del(int n, double eps, double m, double cost_scale) {
  const double c = 1.0 - eps;
  double best = 0.0;
  const int wide = n <= 32 ? n : 0;
  for (int k1 = 0; k1 <= wide; ++k1) {
    for (int k2 = 0; k1 + k2 <= n; ++k2) {
      std::vector<SymClass> classes;
      if (k1 > 0)
        classes.push_back(detail::std_family_class(k1, n, m, c, cost_scale, false));
      if (k2 > 0)
        classes.push_back(detail::std_family_class(k2, n, m, c, cost_scale, true));
      best = std::max(best, symmetric_best_response(std::move(classes)).principal);
    }
  }
  return best;
}

inline double free_agent_family_best_del(int n, double sentinel) {
  const double p = 1.0 / std::pow(static_cast<double>(n), 0.25);
  const double high = 1.0 / (p * p);
  const double c = 1.0 - p / 2.0;
  const double tiny = 1e-6;
  const auto make_class = [&](int count, bool acc_high_prize, bool acc_high_tiny,
                              bool acc_zero_prize) {
    SymClass cl;
    cl.count = count;
    cl.outcomes = {
        {p * p / 2, acc_high_prize, high, sentinel},
        {p * p / 2, acc_high_tiny, high, tiny},
        {(1 - p * p) / 2, acc_zero_prize, 0.0, sentinel},
        {(1 - p * p) / 2, false, 0.0, tiny},
    };
    cl.agent_share = 0.0;
    cl.principal_share = c;
    return cl;
  };
  double best = 0.0;
  const int side = n <= 20 ? n : 2;
  for (int ka = 0; ka <= n; ++ka) {
    for (int kb = 0; kb <= std::min(side, n - ka); ++kb) {
      for (int kc = 0; kc <= std::min(side, n - ka - kb); ++kc) {
        std::vector<SymClass> classes;
        if (ka > 0) classes.push_back(make_class(ka, true, true, false));
        if (kb > 0) classes.push_back(make_class(kb, true, false, false));
        if (kc > 0) classes.push_back(make_class(kc, true, true, true));
        best = std::max(best, symmetric_best_response(std::move(classes)).principal);
      }
    }
  }
  return best;
}

inline double agent_agnostic_family_best_del(int n, double sentinel) {
  const double root = std::pow(static_cast<double>(n), 0.25);
  const double sq = std::sqrt(static_cast<double>(n));
  const double c = 1.0 - 2.0 / root;
  const double planted = static_cast<double>(n) * n;
  // Free-for-the-agent elements accepted on the high outcome only.
  const auto f4 = [&](int count) {
    SymClass cl;
    cl.count = count;
    cl.outcomes = {
        {0.5 / sq, true, sq, sentinel},
        {0.5 / sq, true, sq, 3.0 * sentinel},
        {0.5 * (1 - 1.0 / sq), false, 0.0, sentinel},
        {0.5 * (1 - 1.0 / sq), false, 0.0, 3.0 * sentinel},
    };
    cl.agent_share = 0.0;
    cl.principal_share = c;
    return cl;
  };
  // Fully paid-for elements accepted on both outcomes; the agent hunts the
  // planted prize on the zero outcome.
  const auto f3 = [&](int count) {
    SymClass cl;
    cl.count = count;
    cl.outcomes = {
        {0.5 / sq, true, sq, 0.0},
        {0.5 / sq, true, sq, c / 2.0},
        {1.0 - 1.0 / sq, true, 0.0, planted},
    };
    cl.agent_share = c;
    cl.principal_share = 0.0;
    return cl;
  };
  // Free elements accepted everywhere.
  const auto f6 = [&](int count) {
    SymClass cl;
    cl.count = count;
    cl.outcomes = {
        {0.5 / sq, true, sq, sentinel},
        {0.5 / sq, true, sq, 3.0 * sentinel},
        {0.5 * (1 - 1.0 / sq), true, 0.0, sentinel},
        {0.5 * (1 - 1.0 / sq), true, 0.0, 3.0 * sentinel},
    };
    cl.agent_share = 0.0;
    cl.principal_share = c;
    return cl;
  };
  double best = 0.0;
  for (int k4 = 0; k4 <= n; ++k4) {
    for (int k3 = 0; k3 <= std::min(4, n - k4); ++k3) {
      if (k3 > 0 && c <= kTol) continue;  // no positive share exists
      for (int k6 = 0; k6 <= std::min(2, n - k4 - k3); ++k6) {
        std::vector<SymClass> classes;
        if (k4 > 0) classes.push_back(f4(k4));
        if (k3 > 0) classes.push_back(f3(k3));
        if (k6 > 0) classes.push_back(f6(k6));
        best = std::max(best, symmetric_best_response(std::move(classes)).principal);
      }
    }
  }
  return best;
}

inline std::vector<GapRow> gap_sweep(FamilyId id, const std::vector<int>& ns,
                                     std::uint64_t seed, int jobs = 1) {
  // Validate sizes before fanning out; exceptions must not cross threads.
  for (int n : ns) {
    int root = 0;
    switch (id) {
      case FamilyId::StdImpossibility:
        if (n < 2) throw BadParametersError("sweep needs n >= 2");
        break;
      case FamilyId::DiscountedImpossibility:
        if (!detail::is_perfect_square(n, root))
          throw BadParametersError("discounted sweep needs square n");
        break;
      case FamilyId::FreeAgentImpossibility:
        if (!detail::is_perfect_fourth(n, root))
          throw BadParametersError("free-agent sweep needs fourth-power n");
        break;
      case FamilyId::AgentAgnosticImpossibility:
        if (!detail::is_perfect_fourth(n, root) || n < 16)
          throw BadParametersError("agent-agnostic sweep needs fourth-power n >= 16");
        break;
      case FamilyId::RandomMatroid:
      case FamilyId::RandomKnapsack:
        if (n > 8)
          throw BadParametersError("random-family sweeps enumerate exactly, n <= 8");
        break;
      case FamilyId::SharedCostHalfGap:
        throw BadParametersError("no sweep for this family");
    }
  }
  std::vector<GapRow> rows(ns.size());
  parallel_for(jobs, ns.size(), [&](std::size_t idx) {
    const int n = ns[idx];
    FamilySpec spec;
    spec.id = id;
    spec.n = n;
    spec.seed = seed;
    GapRow row;
    row.family = to_string(id);
    row.n = n;
    row.seed = seed;
    switch (id) {
      case FamilyId::StdImpossibility: {
        const double eps = 1.0 / (2.0 * n);
        row.e_opt = family_expected_opt(spec);
        row.e_del = std_family_best_del(n, eps, std::ceil(n / eps), 1.0);
        break;
      }
      case FamilyId::DiscountedImpossibility: {
        int root = 0;
        if (!detail::is_perfect_square(n, root))
          throw BadParametersError("discounted sweep needs square n");
        const double eps = 1.0 / std::pow(static_cast<double>(n), 0.25);
        row.e_opt = family_expected_opt(spec);
        row.e_del = std_family_best_del(n, eps, root, 1.0 / root);
        break;
      }
      case FamilyId::FreeAgentImpossibility: {
        row.e_opt = family_expected_opt(spec);
        row.e_del = free_agent_family_best_del(n, spec.sentinel);
        break;
      }
      case FamilyId::AgentAgnosticImpossibility: {
        row.e_opt = family_expected_opt(spec);
        row.e_del = agent_agnostic_family_best_del(n, spec.sentinel);
        break;
      }
      case FamilyId::RandomMatroid:
      case FamilyId::RandomKnapsack: {
        const Instance inst = generate_family(spec);
        const CapValues caps = compute_caps(inst);
        const auto p_star =
            ex_ante_membership(inst, caps, 20000, RngStream(seed, 5), true, 1e6).p;
        double del = -std::numeric_limits<double>::infinity();
        if (id == FamilyId::RandomKnapsack) {
          for (KnapsackClass cls : {KnapsackClass::Small, KnapsackClass::Big}) {
            const auto mech = build_free_agent_ocrs(inst, caps, p_star, cls);
            del = std::max(del, simulate_interaction(
                                    inst, mech,
                                    {AgentKind::AdversarialMaximal, TieBreak::AgainstPrincipal},
                                    true, 0, RngStream(seed, 6))
                                    .del.mean);
          }
        } else {
          const auto mech = build_free_agent_ocrs(inst, caps, p_star);
          del = simulate_interaction(
                    inst, mech, {AgentKind::AdversarialMaximal, TieBreak::AgainstPrincipal},
                    true, 0, RngStream(seed, 6))
                    .del.mean;
        }
        row.e_del = del;
        row.e_opt = exact_optimal_dp(inst);
        break;
      }
      default:
        throw BadParametersError("no sweep for this family");
    }
    row.ratio = row.e_opt > 0 ? row.e_del / row.e_opt : 0.0;
    row.ci_lo = row.ratio;
    row.ci_hi = row.ratio;
    rows[idx] = row;
  });
  return rows;
}

}  // namespace pandora
