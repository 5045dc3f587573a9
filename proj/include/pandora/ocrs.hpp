#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "pandora/common.hpp"
#include "pandora/family.hpp"
#include "pandora/instance.hpp"
#include "pandora/parallel.hpp"
#include "pandora/rng.hpp"
#include "pandora/solvers.hpp"

namespace pandora {

struct ExAnteResult {
  std::vector<double> p;
  bool exact = false;
  std::size_t samples = 0;
};

// p*_i = Pr[i in argmax_{S in I} sum Z_i^min]. The argmax is resolved by the
// oracle's deterministic max-weight rule, so I* is a function of the profile.
inline ExAnteResult ex_ante_membership(const Instance& inst, const CapValues& caps,
                                       std::size_t samples, RngStream rng,
                                       bool exact_if_feasible = true,
                                       double exact_guard = 1e6, int jobs = 1) {
  const int n = inst.size();
  const auto argmax_set = [&](const RealizationProfile& prof) {
    std::vector<double> z(n);
    for (int i = 0; i < n; ++i) z[i] = truncated_value_x(inst, caps, prof, i);
    return inst.constraint().max_weight(z).first;
  };
  double combos = 1.0;
  for (int i = 0; i < n; ++i) combos *= inst.element(i).dist.support_size();
  ExAnteResult out;
  out.p.assign(n, 0.0);
  if (exact_if_feasible && combos <= exact_guard) {
    enumerate_atom_profiles(
        inst,
        [&](const RealizationProfile& prof, double p) {
          for (int i : argmax_set(prof)) out.p[i] += p;
        },
        exact_guard + 1);
    out.exact = true;
    return out;
  }
  std::vector<std::vector<int>> hits(samples);
  const std::uint64_t base = rng.next_u64();
  parallel_for(jobs, samples, [&](std::size_t s) {
    RngStream local(base, s);
    const RealizationProfile prof = sample_profile(inst, local);
    hits[s] = argmax_set(prof);
  });
  for (const auto& h : hits)
    for (int i : h) out.p[i] += 1.0;
  for (auto& v : out.p) v /= static_cast<double>(samples);
  out.samples = samples;
  return out;
}

// Maximizes sum_i g_i(p_i) over the constraint polytope, where g_i(p) is the
// expected top-p mass of Z_i^min. Separable concave with piecewise-linear
// pieces: matroid kinds fall to greedy slope allocation over the polymatroid,
// knapsack to the fractional single-constraint greedy.
inline std::vector<double> ex_ante_concave(const Instance& inst, const CapValues& caps,
                                           const std::vector<char>* restrict_to = nullptr) {
  const int n = inst.size();
  const auto& oracle = inst.constraint();
  struct Seg {
    int element;
    double slope;
    double length;
  };
  std::vector<Seg> segs;
  for (int i = 0; i < n; ++i) {
    if (restrict_to && !(*restrict_to)[i]) continue;
    // Oversized knapsack elements are infeasible even alone; the linear
    // relaxation would happily give them mass.
    if (oracle.kind() == ConstraintKind::Knapsack &&
        oracle.sizes()[i] > oracle.budget() + kTol)
      continue;
    // Zero-slope mass is kept for matroid kinds so the canonical optimum
    // saturates (a positive top slope drives the element to p = 1).
    const bool keep_zero = oracle.kind() != ConstraintKind::Knapsack;
    for (const auto& s : zmin_marginal(inst, caps, i).top_mass_segments())
      if ((s.slope > 0.0 || (keep_zero && s.slope == 0.0)) && s.length > 0.0)
        segs.push_back({i, s.slope, s.length});
  }
  std::vector<double> p(n, 0.0);
  switch (oracle.kind()) {
    case ConstraintKind::KUniform:
    case ConstraintKind::Partition: {
      // Segments within one element come out steepest-first already; global
      // steepest-first keeps every prefix feasible for the polymatroid.
      std::stable_sort(segs.begin(), segs.end(),
                       [](const Seg& a, const Seg& b) { return a.slope > b.slope; });
      const bool uniform = oracle.kind() == ConstraintKind::KUniform;
      const std::size_t nblocks = uniform ? 1 : oracle.caps().size();
      std::vector<double> used(nblocks, 0.0);
      for (const auto& s : segs) {
        const int b = uniform ? 0 : oracle.block_of(s.element);
        const double cap = uniform ? oracle.uniform_k() : oracle.caps()[b];
        const double room = std::min(cap - used[b], 1.0 - p[s.element]);
        if (room <= 0.0) continue;
        const double take = std::min(room, s.length);
        p[s.element] += take;
        used[b] += take;
      }
      return p;
    }
    case ConstraintKind::Knapsack: {
      std::stable_sort(segs.begin(), segs.end(), [&](const Seg& a, const Seg& b) {
        const double da = a.slope / std::max(oracle.sizes()[a.element], 1e-12);
        const double db = b.slope / std::max(oracle.sizes()[b.element], 1e-12);
        return da > db;
      });
      double room = oracle.budget();
      for (const auto& s : segs) {
        if (room <= kProbTol) break;
        const double sz = std::max(oracle.sizes()[s.element], 1e-12);
        const double take =
            std::min({s.length, 1.0 - p[s.element], room / sz});
        if (take <= 0.0) continue;
        p[s.element] += take;
        room -= take * sz;
      }
      return p;
    }
    default:
      throw UnsupportedConstraintError("ex-ante concave maximization for this kind");
  }
}

inline double ex_ante_objective(const Instance& inst, const CapValues& caps,
                                const std::vector<double>& p) {
  double total = 0.0;
  for (int i = 0; i < inst.size(); ++i)
    total += zmin_marginal(inst, caps, i).top_mass_value(p[i]);
  return total;
}

// Paper-style quantile with atom splitting, see DiscreteMarginal.
inline ThresholdSplit quantile_threshold(const DiscreteMarginal& zmin, double p) {
  return zmin.quantile_split(p);
}

enum class KnapsackClass { Small, Big };

// Builds the greedy OCRS family for per-element active probabilities.
// k-uniform and partition matroids keep their own constraint as the
// sub-family and rely on the actives living in the halved polytope; knapsack
// splits elements at size budget/2 and serves one class, capacity-greedy for
// small elements and single-slot for big ones.
inline GreedyFamily build_greedy_ocrs(const Instance& inst, const CapValues& caps,
                                      const std::vector<double>& active,
                                      std::optional<KnapsackClass> cls = std::nullopt) {
  const int n = inst.size();
  const auto& oracle = inst.constraint();
  GreedyFamily fam;
  fam.whitelist.assign(n, 0);
  fam.rules.resize(n);
  fam.zcap = caps.tau_x;
  for (int i = 0; i < n; ++i) {
    fam.rules[i] = quantile_threshold(zmin_marginal(inst, caps, i), active[i]);
    fam.whitelist[i] = active[i] > 0.0 ? 1 : 0;
  }
  switch (oracle.kind()) {
    case ConstraintKind::KUniform:
    case ConstraintKind::Partition:
      fam.sub = oracle;
      return fam;
    case ConstraintKind::Knapsack: {
      if (!cls)
        throw BadParametersError("knapsack OCRS needs a served class");
      const double half = oracle.budget() / 2.0;
      for (int i = 0; i < n; ++i) {
        if (oracle.sizes()[i] > oracle.budget() + kTol) fam.whitelist[i] = 0;
        const bool big = oracle.sizes()[i] > half + kTol;
        if ((*cls == KnapsackClass::Big) != big) fam.whitelist[i] = 0;
      }
      if (*cls == KnapsackClass::Big)
        fam.sub = ConstraintOracle::k_uniform(n, 1);
      else
        fam.sub = oracle;
      return fam;
    }
    default:
      throw UnsupportedConstraintError("greedy OCRS for this constraint kind");
  }
}

struct SelectabilityReport {
  std::vector<double> per_element;
  bool exhaustive = false;
  bool heuristic_adversary = false;
  std::size_t samples = 0;
};

namespace detail {

// "i always survives": every family-feasible subset of the active draw can
// absorb i. Closed forms for the shipped counting kinds, subset scan for the
// knapsack small class.
inline bool element_survives(const GreedyFamily& fam, const std::vector<int>& active,
                             int i, bool exhaustive_inner) {
  if (!fam.in_whitelist(i)) return false;
  std::vector<int> others;
  for (int j : active)
    if (j != i && fam.in_whitelist(j)) others.push_back(j);
  const auto& sub = fam.sub;
  switch (sub.kind()) {
    case ConstraintKind::KUniform:
      return static_cast<int>(others.size()) <= sub.uniform_k() - 1;
    case ConstraintKind::Partition: {
      int same = 0;
      for (int j : others)
        if (sub.block_of(j) == sub.block_of(i)) ++same;
      return same <= sub.caps()[sub.block_of(i)] - 1;
    }
    case ConstraintKind::Knapsack: {
      const double room = sub.budget() - sub.sizes()[i];
      if (exhaustive_inner && others.size() <= 20) {
        // Worst feasible load among subsets of the other actives.
        double worst = 0.0;
        const std::size_t m = others.size();
        for (std::size_t mask = 0; mask < (1u << m); ++mask) {
          double load = 0.0;
          for (std::size_t b = 0; b < m; ++b)
            if (mask & (1u << b)) load += sub.sizes()[others[b]];
          if (load <= sub.budget() + kTol) worst = std::max(worst, load);
        }
        return worst <= room + kTol;
      }
      // Greedy heuristic adversary: pack large sizes first.
      std::vector<double> sz;
      for (int j : others) sz.push_back(sub.sizes()[j]);
      std::sort(sz.rbegin(), sz.rend());
      double load = 0.0;
      for (double s : sz)
        if (load + s <= sub.budget() + kTol) load += s;
      return load <= room + kTol;
    }
    default:
      throw UnsupportedConstraintError("selectability for this sub-family kind");
  }
}

}  // namespace detail

// Per-element probability, over active-set draws R(p), that the element can
// always be added to whatever the family has admitted.
inline SelectabilityReport estimate_selectability(const GreedyFamily& fam,
                                                  const std::vector<double>& active,
                                                  bool exhaustive, std::size_t samples,
                                                  RngStream rng, int jobs = 1) {
  const int n = static_cast<int>(active.size());
  std::vector<int> support;
  for (int i = 0; i < n; ++i)
    if (active[i] > 0.0 && fam.in_whitelist(i)) support.push_back(i);
  SelectabilityReport rep;
  rep.per_element.assign(n, 0.0);
  if (exhaustive) {
    if (support.size() > 16)
      throw TooLargeError("exhaustive selectability beyond 16 active elements");
    rep.exhaustive = true;
    const std::size_t m = support.size();
    for (std::size_t mask = 0; mask < (1u << m); ++mask) {
      double prob = 1.0;
      std::vector<int> act;
      for (std::size_t b = 0; b < m; ++b) {
        if (mask & (1u << b)) {
          prob *= active[support[b]];
          act.push_back(support[b]);
        } else {
          prob *= 1.0 - active[support[b]];
        }
      }
      if (prob <= 0.0) continue;
      for (int i = 0; i < n; ++i)
        if (detail::element_survives(fam, act, i, true)) rep.per_element[i] += prob;
    }
    return rep;
  }
  rep.samples = samples;
  rep.heuristic_adversary = fam.sub.kind() == ConstraintKind::Knapsack;
  std::vector<std::vector<char>> ok(samples, std::vector<char>(n, 0));
  const std::uint64_t base = rng.next_u64();
  parallel_for(jobs, samples, [&](std::size_t s) {
    RngStream local(base, s);
    std::vector<int> act;
    for (int i : support)
      if (local.next_unit() < active[i]) act.push_back(i);
    for (int i = 0; i < n; ++i)
      ok[s][i] = detail::element_survives(fam, act, i, false) ? 1 : 0;
  });
  for (std::size_t s = 0; s < samples; ++s)
    for (int i = 0; i < n; ++i) rep.per_element[i] += ok[s][i];
  for (auto& v : rep.per_element) v /= static_cast<double>(samples);
  return rep;
}

}  // namespace pandora
