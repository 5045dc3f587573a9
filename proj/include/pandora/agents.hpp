#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <string>
#include <unordered_map>
#include <vector>

#include "pandora/common.hpp"
#include "pandora/instance.hpp"
#include "pandora/mechanisms.hpp"
#include "pandora/parallel.hpp"
#include "pandora/solvers.hpp"

namespace pandora {

enum class AgentKind {
  ExactDp,
  WeitzmanIndex,
  AdversarialMaximal,
  FavorPrincipalMaximal,
  PrescribedThreshold
};

enum class TieBreak { FavorPrincipal, AgainstPrincipal, LowestId };

struct AgentPolicy {
  AgentKind kind = AgentKind::ExactDp;
  TieBreak tie = TieBreak::FavorPrincipal;
};

struct AgentPlay {
  std::vector<int> probed;
  std::vector<int> proposal;
};

namespace detail {

struct Realized {
  int id;
  double x;
  double y;
};

// Best acceptable proposal among realized active outcomes: maximize the
// agent sum, break ties by the rule. Returns (agent sum, principal sum).
inline std::pair<double, double> best_proposal(
    const MechanismView& view, const std::vector<Realized>& active, TieBreak tie,
    std::vector<int>* out_ids = nullptr) {
  double best_y = 0.0, best_x = 0.0;
  std::vector<int> best_ids;
  std::vector<int> cur;
  std::function<void(std::size_t, double, double)> rec = [&](std::size_t idx,
                                                             double ay, double px) {
    const bool better = [&] {
      if (ay > best_y + kTol) return true;
      if (ay < best_y - kTol) return false;
      switch (tie) {
        case TieBreak::FavorPrincipal: return px > best_x + kProbTol;
        case TieBreak::AgainstPrincipal: return px < best_x - kProbTol;
        case TieBreak::LowestId: return false;
      }
      return false;
    }();
    if (better) {
      best_y = ay;
      best_x = px;
      best_ids = cur;
    }
    for (std::size_t j = idx; j < active.size(); ++j) {
      cur.push_back(active[j].id);
      if (view.feasible(cur))
        rec(j + 1, ay + active[j].y, px + active[j].x);
      cur.pop_back();
    }
  };
  rec(0, 0.0, 0.0);
  if (out_ids) *out_ids = best_ids;
  return {best_y, best_x};
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Exact best response: memoized search over (probed set, realized cases).
// Stop value is the agent's best acceptable proposal given what was probed;
// continuation charges the agent's cost share only (sunk costs never enter a
// decision). Among agent-optimal actions the tie rule picks the
// principal-best, principal-worst, or first-in-scan-order action.

class BestResponseDp {
 public:
  struct Value {
    double agent = 0.0;
    double principal = 0.0;
  };

  BestResponseDp(const Instance& inst, const MechanismView& view, TieBreak tie,
                 double guard = 1e7)
      : inst_(inst), view_(view), tie_(tie) {
    const int n = inst.size();
    double check = std::pow(2.0, n);
    radix_.resize(n);
    std::uint64_t total = 1;
    for (int i = 0; i < n; ++i) {
      check *= static_cast<double>(view.cases[i].size());
      radix_[i] = total;
      total *= view.cases[i].size() + 1;
    }
    if (check > guard) throw TooLargeError("best response dp exceeds guard");
  }

  Value root() { return value(0); }

  Value value(std::uint64_t code) {
    if (auto it = memo_.find(code); it != memo_.end()) return it->second;
    const int n = inst_.size();
    std::vector<int> digit(n);
    decode(code, digit);
    Value best = stop_value(digit);
    for (int i = 0; i < n; ++i) {
      if (digit[i] > 0) continue;
      best = pick(best, forced_probe_value(code, i));
    }
    memo_[code] = best;
    return best;
  }

  // Value of probing element i now (must be unprobed in code), then optimal.
  Value forced_probe_value(std::uint64_t code, int i) {
    Value v{-view_.agent_share[i], -view_.principal_share[i]};
    const auto& cases = view_.cases[i];
    for (std::size_t c = 0; c < cases.size(); ++c) {
      const Value child = value(code + (c + 1) * radix_[i]);
      v.agent += cases[c].p * child.agent;
      v.principal += cases[c].p * child.principal;
    }
    return v;
  }

  Value stop_value(const std::vector<int>& digit) const {
    std::vector<detail::Realized> active;
    for (std::size_t i = 0; i < digit.size(); ++i) {
      if (digit[i] == 0) continue;
      const auto& c = view_.cases[i][digit[i] - 1];
      if (c.acceptable) active.push_back({static_cast<int>(i), c.x, c.y});
    }
    const auto [ay, px] = detail::best_proposal(view_, active, tie_);
    return {ay, px};
  }

  std::uint64_t radix(int i) const { return radix_[i]; }

  void decode(std::uint64_t code, std::vector<int>& digit) const {
    for (int i = static_cast<int>(digit.size()) - 1; i >= 0; --i) {
      digit[i] = static_cast<int>(code / radix_[i]);
      code %= radix_[i];
    }
  }

 private:
  Value pick(const Value& a, const Value& b) const {
    if (b.agent > a.agent + kTol) return b;
    if (b.agent < a.agent - kTol) return a;
    switch (tie_) {
      case TieBreak::FavorPrincipal:
        return b.principal > a.principal + kProbTol ? b : a;
      case TieBreak::AgainstPrincipal:
        return b.principal < a.principal - kProbTol ? b : a;
      case TieBreak::LowestId:
        return a;
    }
    return a;
  }

  const Instance& inst_;
  const MechanismView& view_;
  TieBreak tie_;
  std::vector<std::uint64_t> radix_;
  std::unordered_map<std::uint64_t, Value> memo_;
};

struct BestResponseResult {
  double agent_utility = 0.0;
  double principal_utility = 0.0;
};

inline BestResponseResult best_response_dp(const Instance& inst,
                                           const SingleProposalMechanism& mech,
                                           TieBreak tie, double guard = 1e7) {
  const MechanismView view = make_view(inst, mech);
  BestResponseDp dp(inst, view, tie, guard);
  const auto v = dp.root();
  return {v.agent, v.principal};
}

// ---------------------------------------------------------------------------
// Index agent: runs the lazy matroid greedy on the agent's effective values
// (Y gated by acceptability) with caps recomputed on the gated marginals over
// the whitelist and sub-family. Pandora-shaped mechanisms only.

inline AgentPlay weitzman_index_agent(const Instance& inst,
                                      const SingleProposalMechanism& mech,
                                      const MechanismView& view,
                                      const RealizationProfile& prof,
                                      TieBreak tie = TieBreak::FavorPrincipal) {
  if (!mech.family.sub.is_matroid_kind())
    throw NotPandoraShapedError(
        "index agent needs a per-element monotone rule over a matroid sub-family");
  const int n = inst.size();
  std::vector<double> taus(n, -1.0);
  for (int i = 0; i < n; ++i) {
    if (!mech.family.in_whitelist(i)) continue;
    std::vector<double> v, p;
    for (const auto& c : view.cases[i]) {
      v.push_back(c.acceptable ? c.y : 0.0);
      p.push_back(c.p);
    }
    const DiscreteMarginal eff(std::move(v), std::move(p));
    const double share = view.agent_share[i];
    if (eff.mean() < share - kProbTol) continue;  // never worth probing
    taus[i] = eff.cap_value(std::min(share, eff.mean()));
  }
  const auto run = matroid_index_policy(
      n, taus,
      [&](int i) {
        const double x = realized_x(inst, prof, i);
        return mech.family.value_passes(i, x, prof.tag[i]) ? realized_y(inst, prof, i)
                                                           : 0.0;
      },
      [&](const std::vector<int>& s) { return mech.family.feasible_sub(s); },
      std::vector<double>(view.agent_share));
  AgentPlay play;
  play.probed = run.probed;
  play.proposal = run.selected;
  // A costless agent degenerates to probe-all: anything whitelisted with a
  // reachable positive prize gets opened even when the family is already
  // full. Zero-acceptance elements stay skipped.
  for (int i = 0; i < n; ++i) {
    if (view.agent_share[i] > 0.0 || !mech.family.in_whitelist(i)) continue;
    if (std::find(play.probed.begin(), play.probed.end(), i) != play.probed.end())
      continue;
    bool prize = false;
    for (const auto& c : view.cases[i])
      if (c.acceptable && c.y > 0.0) prize = true;
    if (prize) play.probed.push_back(i);
  }
  if (tie == TieBreak::FavorPrincipal) {
    // Agent-neutral extension: add probed acceptable outcomes of zero agent
    // value, best principal value first.
    std::vector<int> extras;
    for (int i : run.probed) {
      if (std::find(play.proposal.begin(), play.proposal.end(), i) !=
          play.proposal.end())
        continue;
      if (!mech.family.value_passes(i, realized_x(inst, prof, i), prof.tag[i]))
        continue;
      if (realized_y(inst, prof, i) > kTol) continue;
      extras.push_back(i);
    }
    std::sort(extras.begin(), extras.end(), [&](int a, int b) {
      const double xa = realized_x(inst, prof, a), xb = realized_x(inst, prof, b);
      if (xa != xb) return xa > xb;
      return a < b;
    });
    for (int i : extras) {
      std::vector<int> with = play.proposal;
      with.push_back(i);
      std::sort(with.begin(), with.end());
      if (mech.family.feasible_sub(with)) play.proposal = with;
    }
  }
  std::sort(play.proposal.begin(), play.proposal.end());
  return play;
}

// ---------------------------------------------------------------------------
// Free-agent plays. Both probe the whole whitelist (costless for the agent);
// the adversarial one proposes the principal-minimizing maximal acceptable
// set, the favorable one maximizes the agent sum and then the principal sum.

inline AgentPlay worst_case_free_agent(const Instance& inst,
                                       const SingleProposalMechanism& mech,
                                       const RealizationProfile& prof,
                                       bool* heuristic_flag = nullptr) {
  const int n = inst.size();
  AgentPlay play;
  std::vector<int> active;
  for (int i = 0; i < n; ++i) {
    if (!mech.family.in_whitelist(i)) continue;
    play.probed.push_back(i);
    if (mech.family.value_passes(i, realized_x(inst, prof, i), prof.tag[i]))
      active.push_back(i);
  }
  if (static_cast<int>(active.size()) <= 18) {
    // Exact: enumerate maximal acceptable sets, keep the principal-worst.
    double worst = std::numeric_limits<double>::infinity();
    std::vector<int> worst_ids;
    std::vector<int> cur;
    std::function<void(std::size_t, double)> rec = [&](std::size_t idx, double px) {
      bool maximal = true;
      for (int j : active) {
        if (std::find(cur.begin(), cur.end(), j) != cur.end()) continue;
        std::vector<int> with = cur;
        with.push_back(j);
        std::sort(with.begin(), with.end());
        if (mech.family.feasible_sub(with)) {
          maximal = false;
          break;
        }
      }
      if (maximal && (px < worst - kProbTol ||
                      (close(px, worst, kProbTol) && cur < worst_ids))) {
        worst = px;
        worst_ids = cur;
      }
      for (std::size_t j = idx; j < active.size(); ++j) {
        cur.push_back(active[j]);
        std::vector<int> sorted = cur;
        std::sort(sorted.begin(), sorted.end());
        if (mech.family.feasible_sub(sorted))
          rec(j + 1, px + realized_x(inst, prof, active[j]));
        cur.pop_back();
      }
    };
    rec(0, 0.0);
    play.proposal = worst_ids;
  } else {
    if (heuristic_flag) *heuristic_flag = true;
    std::sort(active.begin(), active.end(), [&](int a, int b) {
      const double xa = realized_x(inst, prof, a), xb = realized_x(inst, prof, b);
      if (xa != xb) return xa < xb;
      return a < b;
    });
    for (int i : active) {
      std::vector<int> with = play.proposal;
      with.push_back(i);
      std::sort(with.begin(), with.end());
      if (mech.family.feasible_sub(with)) play.proposal = with;
    }
  }
  std::sort(play.proposal.begin(), play.proposal.end());
  return play;
}

inline AgentPlay favor_principal_maximal_agent(const Instance& inst,
                                               const SingleProposalMechanism& mech,
                                               const MechanismView& view,
                                               const RealizationProfile& prof) {
  const int n = inst.size();
  AgentPlay play;
  std::vector<detail::Realized> active;
  for (int i = 0; i < n; ++i) {
    if (!mech.family.in_whitelist(i)) continue;
    play.probed.push_back(i);
    const double x = realized_x(inst, prof, i);
    if (mech.family.value_passes(i, x, prof.tag[i]))
      active.push_back({i, x, realized_y(inst, prof, i)});
  }
  detail::best_proposal(view, active, TieBreak::FavorPrincipal, &play.proposal);
  std::sort(play.proposal.begin(), play.proposal.end());
  return play;
}

// Prescribed play for indifferent agents: descending principal cap order,
// probe what the family still accepts at cap value, select what it accepts
// at the realized value.
inline AgentPlay prescribed_threshold_agent(const Instance& inst,
                                            const SingleProposalMechanism& mech,
                                            const CapValues& caps,
                                            const RealizationProfile& prof) {
  const int n = inst.size();
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (caps.tau_x[a] != caps.tau_x[b]) return caps.tau_x[a] > caps.tau_x[b];
    return a < b;
  });
  const auto run = threshold_strategy_run(inst, caps, mech.family, order, prof);
  return {run.probed, run.selected};
}

// ---------------------------------------------------------------------------
// Interaction simulator: agent play -> proposal -> acceptance -> utilities.

struct InteractionReport {
  Estimate del;
  Estimate agent;
  bool heuristic_adversary = false;
};

inline InteractionReport simulate_interaction(const Instance& inst,
                                              const SingleProposalMechanism& mech,
                                              const AgentPolicy& policy, bool exact,
                                              std::size_t samples, RngStream rng,
                                              const CapValues* caps_in = nullptr,
                                              int jobs = 1, double guard = 1e7) {
  const MechanismView view = make_view(inst, mech);
  InteractionReport rep;
  if (policy.kind == AgentKind::ExactDp) {
    BestResponseDp dp(inst, view, policy.tie, guard);
    const auto v = dp.root();
    rep.del = {v.principal, v.principal, v.principal, true, 0};
    rep.agent = {v.agent, v.agent, v.agent, true, 0};
    return rep;
  }
  CapValues caps = caps_in ? *caps_in : compute_caps(inst);
  const auto play_one = [&](const RealizationProfile& prof, bool* heuristic) {
    AgentPlay play;
    switch (policy.kind) {
      case AgentKind::WeitzmanIndex:
        play = weitzman_index_agent(inst, mech, view, prof, policy.tie);
        break;
      case AgentKind::AdversarialMaximal:
        play = worst_case_free_agent(inst, mech, prof, heuristic);
        break;
      case AgentKind::FavorPrincipalMaximal:
        play = favor_principal_maximal_agent(inst, mech, view, prof);
        break;
      case AgentKind::PrescribedThreshold:
        play = prescribed_threshold_agent(inst, mech, caps, prof);
        break;
      default:
        break;
    }
    double value_p = 0.0, value_a = 0.0;
    if (mech.accepts(inst, prof, play.proposal)) {
      for (int i : play.proposal) {
        value_p += realized_x(inst, prof, i);
        value_a += realized_y(inst, prof, i);
      }
    }
    for (int i : play.probed) {
      value_p -= view.principal_share[i];
      value_a -= view.agent_share[i];
    }
    return std::make_pair(value_p, value_a);
  };
  if (exact) {
    // Enumerate case products: atom indices plus tag buckets at split rules.
    double check = 1.0;
    for (int i = 0; i < inst.size(); ++i) check *= view.cases[i].size();
    if (check > guard) throw TooLargeError("exact interaction enumeration exceeds guard");
    bool heuristic = false;
    double ep = 0.0, ea = 0.0;
    RealizationProfile prof;
    prof.atom.assign(inst.size(), 0);
    prof.tag.assign(inst.size(), 0.5);
    std::function<void(int, double)> rec = [&](int i, double p) {
      if (i == inst.size()) {
        const auto [vp, va] = play_one(prof, &heuristic);
        ep += p * vp;
        ea += p * va;
        return;
      }
      for (const auto& c : view.cases[i]) {
        prof.atom[i] = c.atom;
        prof.tag[i] = c.tag;
        rec(i + 1, p * c.p);
      }
    };
    rec(0, 1.0);
    rep.del = {ep, ep, ep, true, 0};
    rep.agent = {ea, ea, ea, true, 0};
    rep.heuristic_adversary = heuristic;
    return rep;
  }
  std::vector<std::pair<double, double>> vals(samples);
  std::vector<char> flags(samples, 0);
  const std::uint64_t base = rng.next_u64();
  parallel_for(jobs, samples, [&](std::size_t s) {
    RngStream local(base, s);
    const RealizationProfile prof = sample_profile(inst, local);
    bool h = false;
    vals[s] = play_one(prof, &h);
    flags[s] = h ? 1 : 0;
  });
  bool heuristic = std::find(flags.begin(), flags.end(), 1) != flags.end();
  double mp = 0.0, ma = 0.0;
  for (const auto& [vp, va] : vals) mp += vp, ma += va;
  mp /= static_cast<double>(samples);
  ma /= static_cast<double>(samples);
  double varp = 0.0, vara = 0.0;
  for (const auto& [vp, va] : vals) {
    varp += (vp - mp) * (vp - mp);
    vara += (va - ma) * (va - ma);
  }
  varp /= std::max<std::size_t>(1, samples - 1);
  vara /= std::max<std::size_t>(1, samples - 1);
  const double hp = 1.96 * std::sqrt(varp / static_cast<double>(samples));
  const double ha = 1.96 * std::sqrt(vara / static_cast<double>(samples));
  rep.del = {mp, mp - hp, mp + hp, false, samples};
  rep.agent = {ma, ma - ha, ma + ha, false, samples};
  rep.heuristic_adversary = heuristic;
  return rep;
}

}  // namespace pandora
