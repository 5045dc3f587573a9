#pragma once

#include <algorithm>
#include <vector>

#include "pandora/distribution.hpp"
#include "pandora/set_systems.hpp"

namespace pandora {

// Greedy monotone family: a whitelist, per-element threshold rules, and a
// downward-closed sub-family of the inner constraint. Acceptance of a set is
// membership in the sub-family plus a per-element threshold check. The rules
// act on the truncated value min(v, zcap_i): quantile thresholds are derived
// from the truncated law, and a rule sitting on the cap atom must gate the
// whole upper tail by the tag, not just the literal value.
struct GreedyFamily {
  std::vector<char> whitelist;         // elements ever acceptable
  std::vector<ThresholdSplit> rules;   // per-element (t, q)
  std::vector<double> zcap;            // truncation level, +inf when unused
  ConstraintOracle sub;                // base family the whitelist restricts

  bool in_whitelist(int i) const { return whitelist[i] != 0; }

  double truncated(int i, double value) const {
    if (zcap.empty()) return value;
    return std::min(value, zcap[i]);
  }

  bool feasible_sub(const std::vector<int>& ids) const {
    for (int i : ids)
      if (!whitelist[i]) return false;
    return sub.is_feasible(ids);
  }

  bool value_passes(int i, double value, double tag) const {
    return whitelist[i] && clears_threshold(truncated(i, value), tag, rules[i]);
  }
};

}  // namespace pandora
