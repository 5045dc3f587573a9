#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "pandora/common.hpp"

namespace pandora {

// One possible realization of (X_i, Y_i) with its probability.
struct JointAtom {
  double x = 0.0;
  double y = 0.0;
  double p = 0.0;
};

// Threshold with a tag probability: a realized value v with auxiliary
// uniform tag u clears the threshold iff v > t, or v == t and u < q.
// The tag lets thresholds on atomic distributions hit exact probabilities.
struct ThresholdSplit {
  double t = 0.0;
  double q = 0.0;
};

inline bool clears_threshold(double value, double tag, const ThresholdSplit& s) {
  if (value > s.t + kTol) return true;
  if (value < s.t - kTol) return false;
  return tag < s.q;
}

// Finite one-dimensional law, values ascending, duplicate values merged.
class DiscreteMarginal {
 public:
  DiscreteMarginal() = default;
  DiscreteMarginal(std::vector<double> values, std::vector<double> probs) {
    std::vector<std::pair<double, double>> vp;
    vp.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i)
      vp.emplace_back(values[i], probs[i]);
    std::sort(vp.begin(), vp.end());
    for (const auto& [v, p] : vp) {
      if (!values_.empty() && close(values_.back(), v, kProbTol)) {
        probs_.back() += p;
      } else {
        values_.push_back(v);
        probs_.push_back(p);
      }
    }
  }

  const std::vector<double>& values() const { return values_; }
  const std::vector<double>& probs() const { return probs_; }
  std::size_t size() const { return values_.size(); }

  double mean() const {
    double m = 0.0;
    for (std::size_t i = 0; i < size(); ++i) m += values_[i] * probs_[i];
    return m;
  }

  double min_value() const { return values_.empty() ? 0.0 : values_.front(); }
  double max_value() const { return values_.empty() ? 0.0 : values_.back(); }

  // E[(V - tau)+], piecewise linear and nonincreasing in tau.
  double expected_excess(double tau) const {
    double e = 0.0;
    for (std::size_t i = 0; i < size(); ++i)
      if (values_[i] > tau) e += (values_[i] - tau) * probs_[i];
    return e;
  }

  double upper_mass(double t) const {  // Pr[V > t]
    double m = 0.0;
    for (std::size_t i = 0; i < size(); ++i)
      if (values_[i] > t + kTol) m += probs_[i];
    return m;
  }

  double mass_at(double t) const {  // Pr[V == t]
    double m = 0.0;
    for (std::size_t i = 0; i < size(); ++i)
      if (close(values_[i], t)) m += probs_[i];
    return m;
  }

  // Minimal tau with E[(V - tau)+] == cost. Exact: the excess function is
  // piecewise linear with breakpoints at the support, so the crossing segment
  // is solved in closed form. Throws NegativeCapError when cost > E[V].
  double cap_value(double cost) const {
    const double m = mean();
    if (cost > m + kProbTol * std::max(1.0, std::fabs(m)))
      throw NegativeCapError("cap equation has no nonnegative solution: cost " +
                             std::to_string(cost) + " > mean " +
                             std::to_string(m));
    if (cost <= kProbTol) return max_value();
    // Walk breakpoints from the top. At tau == values_[i]:
    //   E(tau) = sum_{j > i} p_j (v_j - v_i).
    double tail_mass = 0.0;   // Pr[V > v_i]
    double tail_value = 0.0;  // E[V · 1{V > v_i}]
    for (std::size_t idx = size(); idx-- > 0;) {
      const double v = values_[idx];
      const double excess_here = tail_value - tail_mass * v;
      if (excess_here >= cost - kProbTol) {
        // Crossing lies in [v, previous breakpoint]; slope is -tail_mass.
        return v - (cost - excess_here) / tail_mass;
      }
      tail_mass += probs_[idx];
      tail_value += probs_[idx] * values_[idx];
    }
    // cost <= mean guaranteed above, so the crossing is below the support.
    return (tail_value - cost) / tail_mass;
  }

  // The paper-style quantile: t = min{beta : F(beta) >= 1 - p} together with
  // the tag probability q making Pr[V > t] + q Pr[V = t] == p exactly.
  ThresholdSplit quantile_split(double p) const {
    if (p <= 0.0) return {max_value(), 0.0};
    if (p > 1.0) p = 1.0;
    double above = 0.0;
    for (std::size_t idx = size(); idx-- > 0;) {
      const double at = probs_[idx];
      if (above + at >= p - kProbTol) {
        double q = (p - above) / at;
        q = std::min(1.0, std::max(0.0, q));
        return {values_[idx], q};
      }
      above += at;
    }
    return {min_value(), 1.0};
  }

  // g(p): expected sum of the top-p probability mass. Piecewise linear and
  // concave with breakpoints at cumulative atom probabilities.
  double top_mass_value(double p) const {
    if (p <= 0.0) return 0.0;
    double remaining = std::min(p, 1.0);
    double g = 0.0;
    for (std::size_t idx = size(); idx-- > 0 && remaining > 0.0;) {
      const double take = std::min(remaining, probs_[idx]);
      g += take * values_[idx];
      remaining -= take;
    }
    return g;
  }

  struct Segment {
    double slope;   // atom value, descending across segments
    double length;  // atom probability
  };

  // Concave segments of g, steepest first.
  std::vector<Segment> top_mass_segments() const {
    std::vector<Segment> segs;
    segs.reserve(size());
    for (std::size_t idx = size(); idx-- > 0;)
      segs.push_back({values_[idx], probs_[idx]});
    return segs;
  }

  // min(V, cap) pushforward.
  DiscreteMarginal truncated(double cap) const {
    std::vector<double> v, p;
    for (std::size_t i = 0; i < size(); ++i) {
      v.push_back(std::min(values_[i], cap));
      p.push_back(probs_[i]);
    }
    return DiscreteMarginal(std::move(v), std::move(p));
  }

 private:
  std::vector<double> values_;
  std::vector<double> probs_;
};

// Per-element finite-support joint law of (X_i, Y_i). Atoms are kept sorted
// by (x, y) with exact duplicates merged.
class FiniteJointDistribution {
 public:
  FiniteJointDistribution() = default;
  explicit FiniteJointDistribution(std::vector<JointAtom> atoms) {
    std::sort(atoms.begin(), atoms.end(), [](const JointAtom& a, const JointAtom& b) {
      if (a.x != b.x) return a.x < b.x;
      return a.y < b.y;
    });
    for (const auto& a : atoms) {
      if (!atoms_.empty() && close(atoms_.back().x, a.x, kProbTol) &&
          close(atoms_.back().y, a.y, kProbTol)) {
        atoms_.back().p += a.p;
      } else {
        atoms_.push_back(a);
      }
    }
  }

  const std::vector<JointAtom>& atoms() const { return atoms_; }
  std::size_t support_size() const { return atoms_.size(); }

  double mean_x() const {
    double m = 0.0;
    for (const auto& a : atoms_) m += a.x * a.p;
    return m;
  }
  double mean_y() const {
    double m = 0.0;
    for (const auto& a : atoms_) m += a.y * a.p;
    return m;
  }

  DiscreteMarginal marginal_x() const {
    std::vector<double> v, p;
    for (const auto& a : atoms_) v.push_back(a.x), p.push_back(a.p);
    return DiscreteMarginal(std::move(v), std::move(p));
  }
  DiscreteMarginal marginal_y() const {
    std::vector<double> v, p;
    for (const auto& a : atoms_) v.push_back(a.y), p.push_back(a.p);
    return DiscreteMarginal(std::move(v), std::move(p));
  }

  // Invariant violations, empty when well formed.
  std::vector<std::string> check() const {
    std::vector<std::string> bad;
    if (atoms_.empty()) {
      bad.push_back("empty support");
      return bad;
    }
    double sum = 0.0;
    for (const auto& a : atoms_) {
      if (!(a.p > 0.0)) bad.push_back("non-positive atom probability");
      if (!std::isfinite(a.x) || a.x < 0.0) bad.push_back("invalid x value");
      if (!std::isfinite(a.y) || a.y < 0.0) bad.push_back("invalid y value");
      sum += a.p;
    }
    if (!close(sum, 1.0, kProbTol)) bad.push_back("probabilities do not sum to 1");
    return bad;
  }

 private:
  std::vector<JointAtom> atoms_;
};

}  // namespace pandora
