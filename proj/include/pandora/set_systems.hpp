#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "pandora/common.hpp"

namespace pandora {

enum class ConstraintKind { KUniform, Partition, MatroidByOracle, Knapsack, Matching };

inline const char* to_string(ConstraintKind k) {
  switch (k) {
    case ConstraintKind::KUniform: return "k_uniform";
    case ConstraintKind::Partition: return "partition";
    case ConstraintKind::MatroidByOracle: return "matroid_oracle";
    case ConstraintKind::Knapsack: return "knapsack";
    case ConstraintKind::Matching: return "matching";
  }
  return "?";
}

// Downward-closed set system over ground set {0..n-1} with feasibility,
// exact max-weight, and enumeration. Matroid kinds answer max-weight by
// greedy; knapsack by exact DP over integer-rescaled sizes (branch and bound
// when the sizes resist rescaling); matching by bounded enumeration.
class ConstraintOracle {
 public:
  using Predicate = std::function<bool(const std::vector<int>&)>;

  static ConstraintOracle k_uniform(int n, int k) {
    ConstraintOracle o;
    o.kind_ = ConstraintKind::KUniform;
    o.n_ = n;
    o.k_ = k;
    return o;
  }

  static ConstraintOracle partition(int n, std::vector<std::vector<int>> blocks,
                                    std::vector<int> caps) {
    ConstraintOracle o;
    o.kind_ = ConstraintKind::Partition;
    o.n_ = n;
    o.block_of_.assign(n, -1);
    for (std::size_t b = 0; b < blocks.size(); ++b)
      for (int i : blocks[b]) o.block_of_[i] = static_cast<int>(b);
    for (int i = 0; i < n; ++i)
      if (o.block_of_[i] < 0)
        throw BadParametersError("partition blocks do not cover the ground set");
    o.caps_ = std::move(caps);
    o.blocks_ = std::move(blocks);
    return o;
  }

  static ConstraintOracle knapsack(std::vector<double> sizes, double budget) {
    ConstraintOracle o;
    o.kind_ = ConstraintKind::Knapsack;
    o.n_ = static_cast<int>(sizes.size());
    o.sizes_ = std::move(sizes);
    o.budget_ = budget;
    return o;
  }

  // Ground set = edges of a bipartite graph; feasible = matchings.
  static ConstraintOracle matching(std::vector<std::pair<int, int>> edges) {
    ConstraintOracle o;
    o.kind_ = ConstraintKind::Matching;
    o.n_ = static_cast<int>(edges.size());
    o.edges_ = std::move(edges);
    return o;
  }

  static ConstraintOracle matroid_oracle(int n, Predicate independent) {
    ConstraintOracle o;
    o.kind_ = ConstraintKind::MatroidByOracle;
    o.n_ = n;
    o.predicate_ = std::move(independent);
    return o;
  }

  ConstraintKind kind() const { return kind_; }
  int ground_size() const { return n_; }
  int uniform_k() const { return k_; }
  const std::vector<std::vector<int>>& blocks() const { return blocks_; }
  const std::vector<int>& caps() const { return caps_; }
  int block_of(int i) const { return block_of_[i]; }
  const std::vector<double>& sizes() const { return sizes_; }
  double budget() const { return budget_; }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }

  bool is_matroid_kind() const {
    return kind_ == ConstraintKind::KUniform || kind_ == ConstraintKind::Partition ||
           kind_ == ConstraintKind::MatroidByOracle;
  }

  // subset must hold distinct ids within the ground set.
  bool is_feasible(const std::vector<int>& subset) const {
    switch (kind_) {
      case ConstraintKind::KUniform:
        return static_cast<int>(subset.size()) <= k_;
      case ConstraintKind::Partition: {
        std::vector<int> used(caps_.size(), 0);
        for (int i : subset)
          if (++used[block_of_[i]] > caps_[block_of_[i]]) return false;
        return true;
      }
      case ConstraintKind::Knapsack: {
        double total = 0.0;
        for (int i : subset) total += sizes_[i];
        return total <= budget_ + kTol;
      }
      case ConstraintKind::Matching: {
        std::vector<int> lhs, rhs;
        for (int i : subset) {
          lhs.push_back(edges_[i].first);
          rhs.push_back(edges_[i].second);
        }
        std::sort(lhs.begin(), lhs.end());
        std::sort(rhs.begin(), rhs.end());
        return std::adjacent_find(lhs.begin(), lhs.end()) == lhs.end() &&
               std::adjacent_find(rhs.begin(), rhs.end()) == rhs.end();
      }
      case ConstraintKind::MatroidByOracle:
        return predicate_(subset);
    }
    return false;
  }

  // Exact max-weight feasible subset. Negative weights are never selected.
  // Matroid kinds break value ties toward lower element ids.
  std::pair<std::vector<int>, double> max_weight(const std::vector<double>& w) const {
    switch (kind_) {
      case ConstraintKind::KUniform:
      case ConstraintKind::Partition:
      case ConstraintKind::MatroidByOracle:
        return matroid_greedy(w);
      case ConstraintKind::Knapsack:
        return knapsack_max(w);
      case ConstraintKind::Matching:
        return matching_max(w);
    }
    return {{}, 0.0};
  }

  // Every member of the family exactly once, including the empty set.
  // Downward closure makes prefix pruning complete.
  void enumerate_feasible(const std::function<void(const std::vector<int>&)>& emit,
                          int guard = 20) const {
    if (n_ > guard)
      throw TooLargeError("enumerate_feasible: ground set exceeds guard of " +
                          std::to_string(guard));
    std::vector<int> current;
    enumerate_rec(current, 0, emit);
  }

  std::vector<std::vector<int>> enumerate_all(int guard = 20) const {
    std::vector<std::vector<int>> out;
    enumerate_feasible([&](const std::vector<int>& s) { out.push_back(s); }, guard);
    return out;
  }

 private:
  void enumerate_rec(std::vector<int>& current, int start,
                     const std::function<void(const std::vector<int>&)>& emit) const {
    emit(current);
    for (int i = start; i < n_; ++i) {
      current.push_back(i);
      if (is_feasible(current)) enumerate_rec(current, i + 1, emit);
      current.pop_back();
    }
  }

  std::pair<std::vector<int>, double> matroid_greedy(const std::vector<double>& w) const {
    std::vector<int> order(n_);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      if (w[a] != w[b]) return w[a] > w[b];
      return a < b;
    });
    std::vector<int> picked;
    double total = 0.0;
    for (int i : order) {
      if (w[i] <= 0.0) break;
      picked.push_back(i);
      std::sort(picked.begin(), picked.end());
      if (is_feasible(picked)) {
        total += w[i];
      } else {
        picked.erase(std::find(picked.begin(), picked.end(), i));
      }
    }
    std::sort(picked.begin(), picked.end());
    return {picked, total};
  }

  // Continued-fraction rational fit with bounded denominator.
  static std::optional<std::pair<long long, long long>> to_rational(double v,
                                                                    long long max_den) {
    long long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    double x = v;
    for (int it = 0; it < 64; ++it) {
      const double fl = std::floor(x);
      const long long a = static_cast<long long>(fl);
      long long p2 = a * p1 + p0, q2 = a * q1 + q0;
      if (q2 > max_den) break;
      p0 = p1, q0 = q1, p1 = p2, q1 = q2;
      if (std::fabs(v - static_cast<double>(p1) / static_cast<double>(q1)) < 1e-9)
        return std::make_pair(p1, q1);
      const double frac = x - fl;
      if (frac < 1e-12) break;
      x = 1.0 / frac;
    }
    return std::nullopt;
  }

  std::pair<std::vector<int>, double> knapsack_max(const std::vector<double>& w) const {
    constexpr long long kMaxDen = 1'000'000;
    long long scale = 1;
    bool rational = true;
    for (double s : sizes_) {
      auto r = to_rational(s, kMaxDen);
      if (!r) {
        rational = false;
        break;
      }
      const long long den = r->second;
      scale = scale / std::gcd(scale, den) * den;
      if (scale > kMaxDen) {
        rational = false;
        break;
      }
    }
    if (rational) {
      const long long cap = static_cast<long long>(std::floor(budget_ * scale + 1e-6));
      if (cap >= 0 && static_cast<long long>(n_) * (cap + 1) <= 50'000'000)
        return knapsack_dp(w, scale, cap);
    }
    return knapsack_branch_bound(w);
  }

  std::pair<std::vector<int>, double> knapsack_dp(const std::vector<double>& w,
                                                  long long scale, long long cap) const {
    const int W = static_cast<int>(cap);
    std::vector<double> best(W + 1, 0.0);
    std::vector<std::vector<char>> take(n_, std::vector<char>(W + 1, 0));
    for (int i = 0; i < n_; ++i) {
      if (w[i] <= 0.0) continue;
      const int sz = static_cast<int>(std::llround(sizes_[i] * scale));
      if (sz > W) continue;
      for (int c = W; c >= sz; --c) {
        const double with = best[c - sz] + w[i];
        if (with > best[c] + kProbTol) {
          best[c] = with;
          take[i][c] = 1;
        }
      }
    }
    std::vector<int> picked;
    int c = W;
    for (int i = n_ - 1; i >= 0; --i) {
      if (take[i][c]) {
        picked.push_back(i);
        c -= static_cast<int>(std::llround(sizes_[i] * scale));
      }
    }
    std::sort(picked.begin(), picked.end());
    return {picked, best[W]};
  }

  std::pair<std::vector<int>, double> knapsack_branch_bound(
      const std::vector<double>& w) const {
    std::vector<int> order;
    for (int i = 0; i < n_; ++i)
      if (w[i] > 0.0) order.push_back(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      const double da = w[a] / std::max(sizes_[a], 1e-12);
      const double db = w[b] / std::max(sizes_[b], 1e-12);
      if (da != db) return da > db;
      return a < b;
    });
    std::vector<int> best_set, cur;
    double best_val = 0.0;
    std::function<void(std::size_t, double, double)> rec = [&](std::size_t idx,
                                                               double used, double val) {
      if (val > best_val + kProbTol) {
        best_val = val;
        best_set = cur;
      }
      if (idx >= order.size()) return;
      // Fractional relaxation bound.
      double bound = val, room = budget_ - used;
      for (std::size_t j = idx; j < order.size() && room > kTol; ++j) {
        const int i = order[j];
        const double frac = std::min(1.0, room / std::max(sizes_[i], 1e-12));
        bound += frac * w[i];
        room -= frac * sizes_[i];
      }
      if (bound <= best_val + kProbTol) return;
      const int i = order[idx];
      if (used + sizes_[i] <= budget_ + kTol) {
        cur.push_back(i);
        rec(idx + 1, used + sizes_[i], val + w[i]);
        cur.pop_back();
      }
      rec(idx + 1, used, val);
    };
    rec(0, 0.0, 0.0);
    std::sort(best_set.begin(), best_set.end());
    return {best_set, best_val};
  }

  std::pair<std::vector<int>, double> matching_max(const std::vector<double>& w) const {
    if (n_ > 22)
      throw UnsupportedExactError("matching max-weight beyond enumeration scale");
    std::vector<int> order;
    for (int i = 0; i < n_; ++i)
      if (w[i] > 0.0) order.push_back(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      if (w[a] != w[b]) return w[a] > w[b];
      return a < b;
    });
    std::vector<int> best_set, cur;
    double best_val = 0.0;
    std::function<void(std::size_t, double)> rec = [&](std::size_t idx, double val) {
      if (val > best_val + kProbTol) {
        best_val = val;
        best_set = cur;
      }
      if (idx >= order.size()) return;
      double bound = val;
      for (std::size_t j = idx; j < order.size(); ++j) bound += w[order[j]];
      if (bound <= best_val + kProbTol) return;
      const int i = order[idx];
      cur.push_back(i);
      std::vector<int> sorted = cur;
      std::sort(sorted.begin(), sorted.end());
      if (is_feasible(sorted)) rec(idx + 1, val + w[i]);
      cur.pop_back();
      rec(idx + 1, val);
    };
    rec(0, 0.0);
    std::sort(best_set.begin(), best_set.end());
    return {best_set, best_val};
  }

  ConstraintKind kind_ = ConstraintKind::KUniform;
  int n_ = 0;
  int k_ = 0;
  std::vector<std::vector<int>> blocks_;
  std::vector<int> block_of_;
  std::vector<int> caps_;
  std::vector<double> sizes_;
  double budget_ = 0.0;
  std::vector<std::pair<int, int>> edges_;
  Predicate predicate_;
};

// p (elementwise scaled by 1/scale) lies in the constraint polytope. Matroid
// kinds use their exact inequalities; knapsack uses its natural linear
// relaxation, which is the polytope the OCRS constructions are built for.
inline bool in_polytope(const ConstraintOracle& oracle, const std::vector<double>& p,
                        double scale = 1.0) {
  const double slack = kTol;
  double total = 0.0;
  for (double v : p) {
    if (v < -slack || v > scale + slack) return false;
    total += v;
  }
  switch (oracle.kind()) {
    case ConstraintKind::KUniform:
      return total <= scale * oracle.uniform_k() + slack;
    case ConstraintKind::Partition: {
      const auto& caps = oracle.caps();
      std::vector<double> sums(caps.size(), 0.0);
      for (std::size_t i = 0; i < p.size(); ++i)
        sums[oracle.block_of(static_cast<int>(i))] += p[i];
      for (std::size_t b = 0; b < caps.size(); ++b)
        if (sums[b] > scale * caps[b] + slack) return false;
      return true;
    }
    case ConstraintKind::Knapsack: {
      double load = 0.0;
      for (std::size_t i = 0; i < p.size(); ++i)
        load += p[i] * oracle.sizes()[i];
      return load <= scale * oracle.budget() + slack;
    }
    default:
      throw UnsupportedConstraintError("polytope membership for this kind");
  }
}

}  // namespace pandora
