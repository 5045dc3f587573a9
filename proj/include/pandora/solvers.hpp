#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <unordered_map>
#include <vector>

#include "pandora/common.hpp"
#include "pandora/family.hpp"
#include "pandora/instance.hpp"
#include "pandora/parallel.hpp"
#include "pandora/rng.hpp"

namespace pandora {

struct PolicyRun {
  std::vector<int> probed;
  std::vector<int> selected;
  double utility = 0.0;
};

struct Estimate {
  double mean = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  bool exact = false;
  std::size_t samples = 0;
};

// Enumerates all atom profiles with their probabilities. Tags are fixed at
// 0.5, which is only observable through rules with fractional q.
inline void enumerate_atom_profiles(
    const Instance& inst,
    const std::function<void(const RealizationProfile&, double)>& visit,
    double guard = 1e7) {
  const int n = inst.size();
  double combos = 1.0;
  for (int i = 0; i < n; ++i) combos *= inst.element(i).dist.support_size();
  if (combos > guard)
    throw TooLargeError("profile enumeration exceeds guard");
  RealizationProfile prof;
  prof.atom.assign(n, 0);
  prof.tag.assign(n, 0.5);
  std::function<void(int, double)> rec = [&](int i, double p) {
    if (i == n) {
      visit(prof, p);
      return;
    }
    const auto& atoms = inst.element(i).dist.atoms();
    for (std::size_t a = 0; a < atoms.size(); ++a) {
      prof.atom[i] = static_cast<int>(a);
      rec(i + 1, p * atoms[a].p);
    }
  };
  rec(0, 1.0);
}

// Lazy matroid greedy on virtual values kappa_i = min(v_i, tau_i): take the
// largest addable candidate among unprobed caps and probed virtual values;
// probe it when unprobed, select it when probed and positive. Ties go to the
// lowest element id. Generic over the value side so the agents module can
// run it on effective agent values.
inline PolicyRun matroid_index_policy(
    int n, const std::vector<double>& taus,
    const std::function<double(int)>& reveal,
    const std::function<bool(const std::vector<int>&)>& addable_check,
    const std::vector<double>& probe_costs) {
  PolicyRun run;
  std::vector<char> probed(n, 0), selected(n, 0);
  std::vector<double> kappa(n, 0.0), raw(n, 0.0);
  std::vector<int> sel;
  for (;;) {
    double best = 0.0;
    int best_i = -1;
    for (int i = 0; i < n; ++i) {
      if (selected[i]) continue;
      const double cand = probed[i] ? kappa[i] : taus[i];
      if (cand <= best) continue;
      std::vector<int> with = sel;
      with.push_back(i);
      std::sort(with.begin(), with.end());
      if (!addable_check(with)) continue;
      best = cand;
      best_i = i;
    }
    if (best_i < 0) break;
    if (!probed[best_i]) {
      probed[best_i] = 1;
      run.probed.push_back(best_i);
      raw[best_i] = reveal(best_i);
      kappa[best_i] = std::min(raw[best_i], taus[best_i]);
    } else {
      selected[best_i] = 1;
      sel.push_back(best_i);
      std::sort(sel.begin(), sel.end());
      run.utility += raw[best_i];
    }
  }
  for (int i : run.probed) run.utility -= probe_costs[i];
  run.selected = sel;
  return run;
}

// The non-delegated benchmark policy. Costs default to the full c_i.
inline PolicyRun generalized_weitzman_policy(const Instance& inst,
                                             const CapValues& caps,
                                             const RealizationProfile& prof,
                                             const std::vector<double>* costs = nullptr) {
  if (!inst.constraint().is_matroid_kind())
    throw NotMatroidError("index policy requires a matroid constraint kind");
  const std::vector<double> c = costs ? *costs : inst.full_costs();
  return matroid_index_policy(
      inst.size(), caps.tau_x,
      [&](int i) { return realized_x(inst, prof, i); },
      [&](const std::vector<int>& s) { return inst.constraint().is_feasible(s); }, c);
}

inline double weitzman_expected_exact(const Instance& inst, const CapValues& caps,
                                      const std::vector<double>* costs = nullptr,
                                      double guard = 1e7) {
  double total = 0.0;
  enumerate_atom_profiles(
      inst,
      [&](const RealizationProfile& prof, double p) {
        total += p * generalized_weitzman_policy(inst, caps, prof, costs).utility;
      },
      guard);
  return total;
}

// Exact adaptive optimum of the probing objective: memoized recursion over
// (probed set, realized atoms on the probed set); the final selection is the
// max-weight feasible subset of probed outcomes.
class ExactDp {
 public:
  explicit ExactDp(const Instance& inst, const std::vector<double>* costs = nullptr,
                   double guard = 1e7)
      : inst_(inst), costs_(costs ? *costs : inst.full_costs()) {
    const int n = inst.size();
    double check = std::pow(2.0, n);
    radix_.resize(n);
    std::uint64_t total = 1;
    for (int i = 0; i < n; ++i) {
      const std::size_t m = inst.element(i).dist.support_size();
      check *= static_cast<double>(m);
      radix_[i] = total;
      total *= (m + 1);
    }
    if (check > guard)
      throw TooLargeError("exact dp state space exceeds guard");
    states_ = total;
    if (states_ <= 4'000'000) flat_.assign(states_, kUnset);
  }

  double root_value() { return value(0); }

  double value(std::uint64_t code) {
    if (!flat_.empty()) {
      if (flat_[code] != kUnset) return flat_[code];
    } else if (auto it = memo_.find(code); it != memo_.end()) {
      return it->second;
    }
    const int n = inst_.size();
    std::vector<int> digit(n);
    std::uint64_t rem = code;
    for (int i = n - 1; i >= 0; --i) {
      digit[i] = static_cast<int>(rem / radix_[i]);
      rem %= radix_[i];
    }
    // Stop: select the best feasible subset of what has been probed.
    std::vector<double> w(n, -1.0);
    for (int i = 0; i < n; ++i)
      if (digit[i] > 0) w[i] = inst_.element(i).dist.atoms()[digit[i] - 1].x;
    double best = inst_.constraint().max_weight(w).second;
    // Or probe one more element.
    for (int i = 0; i < n; ++i) {
      if (digit[i] > 0) continue;
      double ev = -costs_[i];
      const auto& atoms = inst_.element(i).dist.atoms();
      for (std::size_t a = 0; a < atoms.size(); ++a)
        ev += atoms[a].p * value(code + (a + 1) * radix_[i]);
      best = std::max(best, ev);
    }
    if (!flat_.empty())
      flat_[code] = best;
    else
      memo_[code] = best;
    return best;
  }

 private:
  static constexpr double kUnset = -std::numeric_limits<double>::infinity();
  const Instance& inst_;
  std::vector<double> costs_;
  std::vector<std::uint64_t> radix_;
  std::uint64_t states_ = 0;
  std::vector<double> flat_;
  std::unordered_map<std::uint64_t, double> memo_;
};

inline double exact_optimal_dp(const Instance& inst,
                               const std::vector<double>* costs = nullptr,
                               double guard = 1e7) {
  return ExactDp(inst, costs, guard).root_value();
}

// E[max_{S in I} sum_i Z_i^min]: the upper bound every guarantee is proved
// against. Exact enumeration when the profile space is small enough.
inline Estimate opt_surrogate(const Instance& inst, const CapValues& caps,
                              std::size_t samples, RngStream rng,
                              bool exact_if_feasible = true,
                              double exact_guard = 1e6, int jobs = 1) {
  const int n = inst.size();
  double combos = 1.0;
  for (int i = 0; i < n; ++i) combos *= inst.element(i).dist.support_size();
  const auto value_of = [&](const RealizationProfile& prof) {
    std::vector<double> z(n);
    for (int i = 0; i < n; ++i) z[i] = truncated_value_x(inst, caps, prof, i);
    return inst.constraint().max_weight(z).second;
  };
  if (exact_if_feasible && combos <= exact_guard) {
    double total = 0.0;
    enumerate_atom_profiles(
        inst, [&](const RealizationProfile& prof, double p) { total += p * value_of(prof); },
        exact_guard + 1);
    return {total, total, total, true, 0};
  }
  std::vector<double> vals(samples);
  const std::uint64_t base = rng.next_u64();
  parallel_for(jobs, samples, [&](std::size_t s) {
    RngStream local(base, s);
    const RealizationProfile prof = sample_profile(inst, local);
    vals[s] = value_of(prof);
  });
  double mean = 0.0;
  for (double v : vals) mean += v;
  mean /= static_cast<double>(samples);
  double var = 0.0;
  for (double v : vals) var += (v - mean) * (v - mean);
  var /= std::max<std::size_t>(1, samples - 1);
  const double half = 1.96 * std::sqrt(var / static_cast<double>(samples));
  return {mean, mean - half, mean + half, false, samples};
}

// Exogenous-order threshold strategy: probe i iff the family still accepts
// (i, tau_i) on top of what is held, accept iff it accepts (i, X_i).
inline PolicyRun threshold_strategy_run(const Instance& inst, const CapValues& caps,
                                        const GreedyFamily& family,
                                        const std::vector<int>& order,
                                        const RealizationProfile& prof,
                                        const std::vector<double>* costs = nullptr) {
  const std::vector<double> c = costs ? *costs : inst.full_costs();
  PolicyRun run;
  std::vector<int> held;
  for (int i : order) {
    std::vector<int> with = held;
    with.push_back(i);
    std::sort(with.begin(), with.end());
    if (!family.feasible_sub(with)) continue;
    if (!family.value_passes(i, caps.tau_x[i], prof.tag[i])) continue;
    run.probed.push_back(i);
    run.utility -= c[i];
    const double x = realized_x(inst, prof, i);
    if (family.value_passes(i, x, prof.tag[i])) {
      held = with;
      run.selected.push_back(i);
      run.utility += x;
    }
  }
  return run;
}

}  // namespace pandora
