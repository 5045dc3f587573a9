#pragma once

#include <algorithm>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "pandora/common.hpp"

namespace pandora {

// Exact best response for 1-uniform instances whose elements fall into
// exchangeable classes (identical distribution, cost shares, and acceptance
// pattern). The state collapses to remaining counts per class plus the best
// acceptable outcome held so far, which is what makes the impossibility
// sweeps tractable at n in the hundreds.

struct SymOutcome {
  double p = 0.0;
  bool acceptable = false;
  double x = 0.0;
  double y = 0.0;
};

struct SymClass {
  int count = 0;
  std::vector<SymOutcome> outcomes;
  double agent_share = 0.0;
  double principal_share = 0.0;
};

struct SymValue {
  double agent = 0.0;
  double principal = 0.0;
};

class SymmetricBestResponse {
 public:
  explicit SymmetricBestResponse(std::vector<SymClass> classes,
                                 bool favor_principal = true)
      : classes_(std::move(classes)), favor_(favor_principal) {
    // Levels: distinct acceptable (y, x) pairs plus the empty proposal,
    // ordered by agent value then by the tie direction on x.
    levels_.push_back({0.0, 0.0});
    for (const auto& cl : classes_)
      for (const auto& o : cl.outcomes)
        if (o.acceptable) levels_.push_back({o.y, o.x});
    std::sort(levels_.begin(), levels_.end(),
              [&](const std::pair<double, double>& a,
                  const std::pair<double, double>& b) {
                if (a.first != b.first) return a.first < b.first;
                return favor_ ? a.second < b.second : a.second > b.second;
              });
    levels_.erase(std::unique(levels_.begin(), levels_.end()), levels_.end());
    radix_.resize(classes_.size() + 1);
    std::uint64_t total = 1;
    for (std::size_t g = 0; g < classes_.size(); ++g) {
      radix_[g] = total;
      total *= classes_[g].count + 1;
    }
    radix_.back() = total;
    if (total * levels_.size() > (1ull << 62))
      throw TooLargeError("symmetric dp state space overflow");
  }

  SymValue root() {
    std::vector<int> counts(classes_.size());
    for (std::size_t g = 0; g < classes_.size(); ++g)
      counts[g] = classes_[g].count;
    return value(encode(counts, 0));
  }

 private:
  int level_of(const SymOutcome& o) const {
    if (!o.acceptable) return 0;
    for (std::size_t l = levels_.size(); l-- > 0;)
      if (close(levels_[l].first, o.y) && close(levels_[l].second, o.x))
        return static_cast<int>(l);
    return 0;
  }

  std::uint64_t encode(const std::vector<int>& counts, int level) const {
    std::uint64_t code = static_cast<std::uint64_t>(level) * radix_.back();
    for (std::size_t g = 0; g < counts.size(); ++g)
      code += static_cast<std::uint64_t>(counts[g]) * radix_[g];
    return code;
  }

  SymValue value(std::uint64_t code) {
    if (auto it = memo_.find(code); it != memo_.end()) return it->second;
    const int level = static_cast<int>(code / radix_.back());
    std::uint64_t rem = code % radix_.back();
    std::vector<int> counts(classes_.size());
    for (std::size_t g = classes_.size(); g-- > 0;) {
      counts[g] = static_cast<int>(rem / radix_[g]);
      rem %= radix_[g];
    }
    SymValue best{levels_[level].first, levels_[level].second};
    for (std::size_t g = 0; g < classes_.size(); ++g) {
      if (counts[g] == 0) continue;
      SymValue v{-classes_[g].agent_share, -classes_[g].principal_share};
      for (const auto& o : classes_[g].outcomes) {
        const int nl = std::max(level, level_of(o));
        const SymValue child = value(
            code - radix_[g] + static_cast<std::uint64_t>(nl - level) * radix_.back());
        v.agent += o.p * child.agent;
        v.principal += o.p * child.principal;
      }
      if (v.agent > best.agent + kTol ||
          (v.agent > best.agent - kTol &&
           (favor_ ? v.principal > best.principal + kProbTol
                   : v.principal < best.principal - kProbTol)))
        best = v;
    }
    memo_[code] = best;
    return best;
  }

  std::vector<SymClass> classes_;
  bool favor_;
  std::vector<std::pair<double, double>> levels_;  // (y, x), ascending
  std::vector<std::uint64_t> radix_;
  std::unordered_map<std::uint64_t, SymValue> memo_;
};

inline SymValue symmetric_best_response(std::vector<SymClass> classes,
                                        bool favor_principal = true) {
  return SymmetricBestResponse(std::move(classes), favor_principal).root();
}

}  // namespace pandora
