#include <catch2/catch_amalgamated.hpp>

#include "pandora/harness.hpp"
#include "pandora/ocrs.hpp"

using namespace pandora;

namespace {

Instance iid_two_point(int n, double value, double p, double cost,
                       ConstraintOracle oracle) {
  std::vector<Element> elems(n);
  for (int i = 0; i < n; ++i) {
    elems[i].id = i;
    elems[i].dist =
        FiniteJointDistribution({{value, value, p}, {0.0, 0.0, 1.0 - p}});
    elems[i].cost = cost;
  }
  return Instance(std::move(elems), std::move(oracle), {});
}

}  // namespace

TEST_CASE("membership marginals on hand-enumerable instances") {
  // Two identical elements, truncated values in {1 w.p. 1/2, 0}: the argmax
  // takes the lowest id on ties, the empty set when everything is zero.
  const Instance inst = iid_two_point(2, 2.0, 0.5, 0.5, ConstraintOracle::k_uniform(2, 1));
  const CapValues caps = compute_caps(inst);
  CHECK_THAT(caps.tau_x[0], Catch::Matchers::WithinAbs(1.0, 1e-12));
  const auto r = ex_ante_membership(inst, caps, 0, RngStream(1), true, 1e6);
  REQUIRE(r.exact);
  CHECK_THAT(r.p[0], Catch::Matchers::WithinAbs(0.5, 1e-12));
  CHECK_THAT(r.p[1], Catch::Matchers::WithinAbs(0.25, 1e-12));

  // A dominant element that is never tied takes all the mass.
  std::vector<Element> elems(2);
  elems[0].id = 0;
  elems[0].dist = FiniteJointDistribution({{8.0, 8.0, 0.5}, {6.0, 6.0, 0.5}});
  elems[0].cost = 0.25;
  elems[1].id = 1;
  elems[1].dist = FiniteJointDistribution({{1.0, 1.0, 0.5}, {0.5, 0.5, 0.5}});
  elems[1].cost = 0.125;
  Instance dom(std::move(elems), ConstraintOracle::k_uniform(2, 1), {});
  const CapValues dcaps = compute_caps(dom);
  const auto rd = ex_ante_membership(dom, dcaps, 0, RngStream(1), true, 1e6);
  CHECK(rd.p[0] == 1.0);
  CHECK(rd.p[1] == 0.0);
}

TEST_CASE("membership marginals live in the polytope and respect rank") {
  RngStream rng(303);
  for (int t = 0; t < 40; ++t) {
    const int n = rng.uniform_int(2, 5);
    const bool knap = rng.next_unit() < 0.3;
    Instance inst =
        knap ? random_knapsack_instance(rng, n, {})
             : random_instance(rng, n, random_matroid_constraint(rng, n), {});
    const CapValues caps = compute_caps(inst);
    const auto r = ex_ante_membership(inst, caps, 0, RngStream(t), true, 1e6);
    CHECK(in_polytope(inst.constraint(), r.p));
    if (inst.constraint().kind() == ConstraintKind::KUniform) {
      double total = 0.0;
      for (double v : r.p) total += v;
      CHECK(total <= inst.constraint().uniform_k() + 1e-9);
    }
  }
}

TEST_CASE("monte carlo membership converges to the exact marginals") {
  const Instance inst = iid_two_point(2, 2.0, 0.5, 0.5, ConstraintOracle::k_uniform(2, 1));
  const CapValues caps = compute_caps(inst);
  const auto mc = ex_ante_membership(inst, caps, 40000, RngStream(9), false);
  CHECK_FALSE(mc.exact);
  CHECK_THAT(mc.p[0], Catch::Matchers::WithinAbs(0.5, 0.02));
  CHECK_THAT(mc.p[1], Catch::Matchers::WithinAbs(0.25, 0.02));
}

TEST_CASE("concave ex-ante point on single and disjoint-slope elements") {
  {
    const Instance inst =
        iid_two_point(1, 2.0, 0.5, 0.5, ConstraintOracle::k_uniform(1, 1));
    const CapValues caps = compute_caps(inst);
    const auto p = ex_ante_concave(inst, caps);
    CHECK(p[0] == 1.0);
    CHECK_THAT(ex_ante_objective(inst, caps, p),
               Catch::Matchers::WithinAbs(zmin_marginal(inst, caps, 0).mean(), 1e-12));
  }
  {
    // Element 0's slopes (3, 2) dominate element 1's (1, 0.5): the whole
    // 1-uniform budget goes to element 0.
    std::vector<Element> elems(2);
    elems[0].id = 0;
    elems[0].dist = FiniteJointDistribution({{4.0, 4.0, 0.5}, {2.0, 2.0, 0.5}});
    elems[0].cost = 0.5;  // cap 3
    elems[1].id = 1;
    elems[1].dist = FiniteJointDistribution({{1.0, 1.0, 0.5}, {0.5, 0.5, 0.5}});
    elems[1].cost = 0.125;  // cap 0.75
    Instance inst(std::move(elems), ConstraintOracle::k_uniform(2, 1), {});
    const CapValues caps = compute_caps(inst);
    const auto p = ex_ante_concave(inst, caps);
    CHECK(p[0] == 1.0);
    CHECK(p[1] == 0.0);
  }
}

TEST_CASE("concave optimum matches a grid oracle") {
  // 2-uniform, three identical elements: a symmetric optimum exists, so the
  // diagonal grid is an exact independent check.
  const Instance inst =
      iid_two_point(3, 2.0, 0.5, 0.5, ConstraintOracle::k_uniform(3, 2));
  const CapValues caps = compute_caps(inst);
  const auto p = ex_ante_concave(inst, caps);
  const double got = ex_ante_objective(inst, caps, p);
  double grid_best = 0.0;
  for (int i = 0; i <= 1000; ++i) {
    const double q = std::min(1.0, i / 1000.0 * (2.0 / 3.0));
    grid_best = std::max(grid_best,
                         ex_ante_objective(inst, caps, {q, q, q}));
  }
  CHECK(got >= grid_best - 1e-3);
  CHECK(in_polytope(inst.constraint(), p));

  // Knapsack pair against a full 2-d grid.
  std::vector<Element> elems(2);
  elems[0].id = 0;
  elems[0].dist = FiniteJointDistribution({{4.0, 4.0, 0.5}, {0.0, 0.0, 0.5}});
  elems[0].cost = 0.5;
  elems[1].id = 1;
  elems[1].dist = FiniteJointDistribution({{3.0, 3.0, 0.5}, {0.0, 0.0, 0.5}});
  elems[1].cost = 0.25;
  Instance knap(std::move(elems), ConstraintOracle::knapsack({0.75, 0.5}, 1.0), {});
  const CapValues kcaps = compute_caps(knap);
  const auto kp = ex_ante_concave(knap, kcaps);
  const double kgot = ex_ante_objective(knap, kcaps, kp);
  double kbest = 0.0;
  for (int i = 0; i <= 400; ++i) {
    for (int j = 0; j <= 400; ++j) {
      const double a = i / 400.0, b = j / 400.0;
      if (0.75 * a + 0.5 * b > 1.0 + 1e-12) continue;
      kbest = std::max(kbest, ex_ante_objective(knap, kcaps, {a, b}));
    }
  }
  CHECK(kgot >= kbest - 2e-3);
}

TEST_CASE("concave optimum dominates the membership point") {
  RngStream rng(304);
  for (int t = 0; t < 30; ++t) {
    const int n = rng.uniform_int(2, 4);
    const bool knap = rng.next_unit() < 0.4;
    Instance inst =
        knap ? random_knapsack_instance(rng, n, {})
             : random_instance(
                   rng, n, ConstraintOracle::k_uniform(n, rng.uniform_int(1, n)), {});
    const CapValues caps = compute_caps(inst);
    const auto star = ex_ante_membership(inst, caps, 0, RngStream(t), true, 1e6);
    const auto conc = ex_ante_concave(inst, caps);
    CHECK(ex_ante_objective(inst, caps, conc) >=
          ex_ante_objective(inst, caps, star.p) - 1e-9);
  }
}

TEST_CASE("greedy family construction and containment") {
  // One element with full mass: accept exactly above the quantile threshold.
  const Instance one = iid_two_point(1, 2.0, 0.5, 0.5, ConstraintOracle::k_uniform(1, 1));
  const CapValues caps1 = compute_caps(one);
  const auto fam1 = build_greedy_ocrs(one, caps1, {0.5});
  CHECK(fam1.whitelist[0] == 1);
  CHECK(fam1.rules[0].t == 1.0);
  CHECK_THAT(fam1.rules[0].q, Catch::Matchers::WithinAbs(1.0, 1e-12));

  // Partition with singleton blocks: every element independently acceptable.
  std::vector<Element> elems(3);
  for (int i = 0; i < 3; ++i) {
    elems[i].id = i;
    elems[i].dist = FiniteJointDistribution({{2.0, 2.0, 0.5}, {0.0, 0.0, 0.5}});
    elems[i].cost = 0.25;
  }
  Instance free_inst(std::move(elems),
                     ConstraintOracle::partition(3, {{0}, {1}, {2}}, {1, 1, 1}), {});
  const CapValues capsf = compute_caps(free_inst);
  const auto famf = build_greedy_ocrs(free_inst, capsf, {0.4, 0.4, 0.4});
  const auto self = estimate_selectability(famf, {0.4, 0.4, 0.4}, true, 0, RngStream(1));
  for (int i = 0; i < 3; ++i) CHECK(self.per_element[i] == 1.0);

  // Knapsack small class: the sub-family is contained in the constraint and
  // downward closed, checked by enumeration.
  RngStream rng(305);
  for (int t = 0; t < 10; ++t) {
    Instance knap = random_knapsack_instance(rng, 5, {});
    const CapValues caps = compute_caps(knap);
    const auto p = ex_ante_concave(knap, caps);
    std::vector<double> active(p.size());
    for (std::size_t i = 0; i < p.size(); ++i)
      active[i] = (1.0 - 1.0 / std::sqrt(2.0)) * p[i];
    for (auto cls : {KnapsackClass::Small, KnapsackClass::Big}) {
      const auto fam = build_greedy_ocrs(knap, caps, active, cls);
      fam.sub.enumerate_feasible([&](const std::vector<int>& s) {
        bool in_family = true;
        for (int i : s)
          if (!fam.in_whitelist(i)) in_family = false;
        if (!in_family) return;
        CHECK(knap.constraint().is_feasible(s));
        for (std::size_t drop = 0; drop < s.size(); ++drop) {
          std::vector<int> sub = s;
          sub.erase(sub.begin() + drop);
          CHECK(fam.feasible_sub(sub));
        }
      });
    }
  }
}

TEST_CASE("selectability on a two-element race") {
  // 1-uniform, the competitor active half the time: the other element
  // survives exactly when the competitor is inactive.
  const Instance inst = iid_two_point(2, 2.0, 0.5, 0.5, ConstraintOracle::k_uniform(2, 1));
  const CapValues caps = compute_caps(inst);
  const std::vector<double> active{0.5, 0.5};
  const auto fam = build_greedy_ocrs(inst, caps, active);
  const auto rep = estimate_selectability(fam, active, true, 0, RngStream(1));
  REQUIRE(rep.exhaustive);
  CHECK_THAT(rep.per_element[0], Catch::Matchers::WithinAbs(0.5, 1e-12));
  CHECK_THAT(rep.per_element[1], Catch::Matchers::WithinAbs(0.5, 1e-12));

  // Sampled mode agrees within a few sigma.
  const auto mc = estimate_selectability(fam, active, false, 40000, RngStream(2));
  CHECK_THAT(mc.per_element[0], Catch::Matchers::WithinAbs(0.5, 0.02));
}

TEST_CASE("half-polytope families meet the matroid selectability constant") {
  RngStream rng(306);
  for (int t = 0; t < 15; ++t) {
    const int n = rng.uniform_int(3, 6);
    Instance inst = random_instance(rng, n, random_matroid_constraint(rng, n), {});
    const CapValues caps = compute_caps(inst);
    std::vector<double> p(n);
    for (auto& v : p) v = rng.next_unit();
    // Scale into half of the polytope.
    const double lift = 2.0;
    for (auto& v : p) v = std::min(v, 0.5);
    (void)lift;
    if (inst.constraint().kind() == ConstraintKind::KUniform) {
      double total = 0.0;
      for (double v : p) total += v;
      const double cap = 0.5 * inst.constraint().uniform_k();
      if (total > cap)
        for (auto& v : p) v *= cap / total;
    } else {
      const auto& caps_b = inst.constraint().caps();
      std::vector<double> sums(caps_b.size(), 0.0);
      for (int i = 0; i < n; ++i) sums[inst.constraint().block_of(i)] += p[i];
      for (int i = 0; i < n; ++i) {
        const int b = inst.constraint().block_of(i);
        if (sums[b] > 0.5 * caps_b[b]) p[i] *= 0.5 * caps_b[b] / sums[b];
      }
    }
    const auto fam = build_greedy_ocrs(inst, caps, p);
    const auto rep = estimate_selectability(fam, p, true, 0, RngStream(t));
    for (int i = 0; i < n; ++i)
      if (p[i] > 0.0) CHECK(rep.per_element[i] >= 0.25 - 1e-9);
  }
}
