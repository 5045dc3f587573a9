#include <catch2/catch_amalgamated.hpp>

#include <array>

#include "pandora/agents.hpp"
#include "pandora/harness.hpp"
#include "pandora/mechanisms.hpp"

using namespace pandora;

namespace {

Instance binary_instance(std::vector<std::array<double, 3>> rows,
                         ConstraintOracle oracle) {
  std::vector<Element> elems;
  int id = 0;
  for (const auto& row : rows) {
    Element e;
    e.id = id++;
    e.dist = FiniteJointDistribution({{row[0], row[1], row[2]}, {0.0, 0.0, 1.0 - row[2]}});
    e.cost = 0.25 * row[2] * std::min(row[0], row[1]);
    elems.push_back(std::move(e));
  }
  UtilityModel model;
  model.kind = ModelKind::Binary;
  return Instance(std::move(elems), std::move(oracle), model);
}

double exact_opt(const Instance& inst) { return exact_optimal_dp(inst); }

}  // namespace

TEST_CASE("acceptance predicate basics") {
  const Instance inst =
      binary_instance({{4.0, 2.0, 0.5}, {3.0, 5.0, 0.5}},
                      ConstraintOracle::partition(2, {{0}, {1}}, {1, 1}));
  const CapValues caps = compute_caps(inst);
  const auto mech = build_binary_matroid(inst, caps);

  RealizationProfile prof;
  prof.atom = {1, 1};
  prof.tag = {0.0, 0.0};
  CHECK(mech.accepts(inst, prof, {}));  // empty proposal is never rejected
  // Every whitelisted element clears its threshold at the cap.
  for (int i = 0; i < 2; ++i)
    if (mech.family.whitelist[i])
      CHECK(caps.tau_x[i] >= mech.family.rules[i].t - 1e-12);
}

TEST_CASE("binary mechanism acceptance matches hand membership on profiles") {
  const Instance inst =
      binary_instance({{4.0, 2.0, 0.5}, {3.0, 5.0, 0.5}},
                      ConstraintOracle::partition(2, {{0, 1}}, {1}));
  const CapValues caps = compute_caps(inst);
  const auto mech = build_binary_matroid(inst, caps);
  // One block of capacity one: pairs are never acceptable, nonzero singles
  // are acceptable exactly when the tag clears the split at the cap atom.
  for (int a0 = 0; a0 < 2; ++a0) {
    for (int a1 = 0; a1 < 2; ++a1) {
      RealizationProfile prof;
      prof.atom = {a0, a1};
      prof.tag = {0.0, 0.0};  // tags below any positive q
      CHECK_FALSE(mech.accepts(inst, prof, {0, 1}));
      const bool hi0 = a0 == 1;
      const bool hi1 = a1 == 1;
      if (hi0 && mech.family.whitelist[0] && mech.family.rules[0].q > 0.0)
        CHECK(mech.accepts(inst, prof, {0}));
      if (!hi0) CHECK_FALSE(mech.accepts(inst, prof, {0}));
      if (!hi1) CHECK_FALSE(mech.accepts(inst, prof, {1}));
    }
  }
}

TEST_CASE("acceptance is monotone in the realized value") {
  RngStream rng(7700);
  for (int t = 0; t < 20; ++t) {
    const int n = rng.uniform_int(2, 5);
    Instance inst = random_binary_partition_instance(rng, n);
    const CapValues caps = compute_caps(inst);
    const auto mech = build_binary_matroid(inst, caps);
    // Raising an accepted outcome's value never flips acceptance: value
    // rules are lexicographic thresholds.
    for (int i = 0; i < n; ++i) {
      for (double tag : {0.1, 0.9}) {
        bool prev = false;
        for (double v = 0.0; v < 12.0; v += 0.5) {
          const bool now = mech.family.value_passes(i, v, tag);
          if (prev) CHECK(now);
          prev = now;
        }
      }
    }
  }
}

TEST_CASE("accepted proposals are always feasible in the inner constraint") {
  RngStream rng(7701);
  for (int t = 0; t < 10; ++t) {
    const int n = rng.uniform_int(2, 5);
    Instance inst = random_binary_partition_instance(rng, n);
    const CapValues caps = compute_caps(inst);
    const auto mech = build_binary_matroid(inst, caps);
    RngStream prng(t);
    for (int s = 0; s < 20; ++s) {
      const RealizationProfile prof = sample_profile(inst, prng);
      for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        std::vector<int> ids;
        for (int i = 0; i < n; ++i)
          if (mask & (1u << i)) ids.push_back(i);
        if (mech.accepts(inst, prof, ids))
          CHECK(inst.constraint().is_feasible(ids));
      }
    }
  }
}

TEST_CASE("binary matroid guarantee on small random fixtures") {
  RngStream rng(7702);
  for (int t = 0; t < 25; ++t) {
    const int n = rng.uniform_int(2, 6);
    Instance inst = random_binary_partition_instance(rng, n);
    const CapValues caps = compute_caps(inst);
    const auto mech = build_binary_matroid(inst, caps);
    const double opt = exact_opt(inst);
    const auto rep = simulate_interaction(
        inst, mech, {AgentKind::WeitzmanIndex, TieBreak::FavorPrincipal}, true, 0,
        RngStream(1), &caps);
    REQUIRE(rep.del.exact);
    CHECK(rep.del.mean >= 0.25 * opt - 1e-9);
  }
}

TEST_CASE("global-threshold free-agent mechanism hits delta exactly") {
  // Identical elements with truncated values 2 w.p. 1/2: the tag split at
  // the atom reaches one half exactly.
  std::vector<Element> elems(2);
  for (int i = 0; i < 2; ++i) {
    elems[i].id = i;
    elems[i].dist = FiniteJointDistribution({{4.0, 4.0, 0.5}, {0.0, 0.0, 0.5}});
    elems[i].cost = 1.0;  // cap 2
  }
  UtilityModel model;
  model.kind = ModelKind::FreeAgent;
  Instance inst(std::move(elems), ConstraintOracle::k_uniform(2, 1), model);
  const CapValues caps = compute_caps(inst);
  const auto mech = build_free_agent_kuniform(inst, caps, 0.5);
  CHECK(mech.family.rules[0].t == 2.0);
  // Identical two-point elements: the whole-atom variant carries the better
  // floor here, overshooting the count target rather than gating caps.
  CHECK(mech.family.rules[0].q == 1.0);
  CHECK(mech.family.rules[1].q == 1.0);
  CHECK(mech.eval_discount == 0.5);

  // Whenever the builder lands on an interior tag probability, the count
  // event probability equals delta exactly.
  {
    RngStream rng(9119);
    int interior_seen = 0;
    for (int t = 0; t < 60; ++t) {
      const int n = rng.uniform_int(2, 5);
      const int k = 1 + (t % 2);
      if (k > n) continue;
      UtilityModel fm;
      fm.kind = ModelKind::FreeAgent;
      Instance r = random_instance_fine(rng, n, ConstraintOracle::k_uniform(n, k), fm);
      const CapValues rcaps = compute_caps(r);
      const auto m = build_free_agent_kuniform(r, rcaps, 0.5);
      bool interior = false;
      for (int i = 0; i < n; ++i)
        if (m.family.rules[i].q > kTol && m.family.rules[i].q < 1.0 - kTol)
          interior = true;
      if (!interior) continue;
      ++interior_seen;
      // Poisson-binomial count of cleared truncated values.
      std::vector<double> tail(k, 0.0);
      tail[0] = 1.0;
      double hit = 0.0;
      for (int i = 0; i < n; ++i) {
        const auto z = zmin_marginal(r, rcaps, i);
        const double a = z.upper_mass(m.family.rules[i].t) +
                         m.family.rules[i].q * z.mass_at(m.family.rules[i].t);
        for (int j = k; j-- > 0;) {
          const double moved = tail[j] * a;
          tail[j] -= moved;
          if (j + 1 == k)
            hit += moved;
          else
            tail[j + 1] += moved;
        }
      }
      CHECK_THAT(hit, Catch::Matchers::WithinAbs(0.5, 1e-9));
    }
    CHECK(interior_seen >= 5);
  }

  // delta = 0 accepts nothing: the delegated value is zero.
  const auto none = build_free_agent_kuniform(inst, caps, 0.0);
  const auto rep = simulate_interaction(
      inst, none, {AgentKind::AdversarialMaximal, TieBreak::AgainstPrincipal}, true,
      0, RngStream(1), &caps);
  CHECK(rep.del.mean == 0.0);
}

TEST_CASE("free-agent threshold guarantee on small random fixtures") {
  RngStream rng(7703);
  int built = 0;
  for (int t = 0; t < 40 && built < 20; ++t) {
    const int n = rng.uniform_int(2, 4);
    const int k = rng.next_unit() < 0.5 ? 1 : 2;
    if (k > n) continue;
    UtilityModel model;
    model.kind = ModelKind::FreeAgent;
    Instance inst = random_instance(rng, n, ConstraintOracle::k_uniform(n, k), model);
    const CapValues caps = compute_caps(inst);
    const auto mech = build_free_agent_kuniform(inst, caps, 0.5);
    ++built;
    const double opt = exact_opt(inst);
    const auto rep = simulate_interaction(
        inst, mech, {AgentKind::AdversarialMaximal, TieBreak::AgainstPrincipal}, true,
        0, RngStream(t), &caps);
    REQUIRE(rep.del.exact);
    CHECK(rep.del.mean >= 0.5 * opt - 1e-9);
  }
  REQUIRE(built >= 10);
}

TEST_CASE("ocrs-backed free-agent guarantee on small random fixtures") {
  RngStream rng(7704);
  for (int t = 0; t < 15; ++t) {
    const int n = rng.uniform_int(2, 4);
    UtilityModel model;
    model.kind = ModelKind::FreeAgent;
    Instance inst = random_instance(rng, n, random_matroid_constraint(rng, n), model);
    const CapValues caps = compute_caps(inst);
    const auto p = ex_ante_membership(inst, caps, 0, RngStream(t), true, 1e6).p;
    const auto mech = build_free_agent_ocrs(inst, caps, p);
    CHECK(mech.alpha == 0.25);
    CHECK(mech.eval_discount == 0.75);
    const double opt = exact_opt(inst);
    const auto rep = simulate_interaction(
        inst, mech, {AgentKind::AdversarialMaximal, TieBreak::AgainstPrincipal}, true,
        0, RngStream(t), &caps);
    CHECK(rep.del.mean >= 0.25 * opt - 1e-9);
  }
}

TEST_CASE("shared-cost mechanism splits costs and zeroes the agent margin") {
  RngStream rng(7705);
  for (int t = 0; t < 15; ++t) {
    const int n = rng.uniform_int(2, 4);
    UtilityModel model;
    model.kind = ModelKind::SharedCost;
    const bool part = rng.next_unit() < 0.5;
    Instance inst = random_instance(
        rng, n,
        part ? random_matroid_constraint(rng, n) : ConstraintOracle::k_uniform(n, 1),
        model);
    const CapValues caps = compute_caps(inst);
    const auto mech = build_shared_cost(inst, caps, t);
    REQUIRE(mech.cost_division);

    // Division bounds, and exact zero margin wherever the division is
    // interior: E[Y through the gate] minus the share vanishes.
    for (int i = 0; i < n; ++i) {
      const double share = (*mech.cost_division)[i];
      CHECK(share >= -1e-12);
      CHECK(share <= inst.cost(i) + 1e-12);
      if (!mech.family.whitelist[i]) continue;
      double gated = 0.0;
      for (const auto& a : inst.element(i).dist.atoms()) {
        const double zv = mech.family.truncated(i, a.x);
        if (zv > mech.family.rules[i].t + kTol)
          gated += a.p * a.y;
        else if (close(zv, mech.family.rules[i].t))
          gated += a.p * mech.family.rules[i].q * a.y;
      }
      if (share < inst.cost(i) - 1e-12)
        CHECK_THAT(gated - share, Catch::Matchers::WithinAbs(0.0, 1e-9));
    }

    // Side split loses at most half of the surrogate.
    std::vector<char> side = mech.family.whitelist;
    std::vector<char> all(n, 1);
    const double side_sur =
        detail::masked_surrogate(inst, caps, side, 0, RngStream(1));
    const double full_sur =
        detail::masked_surrogate(inst, caps, all, 0, RngStream(1));
    CHECK(side_sur >= 0.5 * full_sur - 1e-9);
  }
}

TEST_CASE("shared-cost guarantee on small random fixtures") {
  RngStream rng(7706);
  for (int t = 0; t < 15; ++t) {
    const int n = rng.uniform_int(2, 4);
    UtilityModel model;
    model.kind = ModelKind::SharedCost;
    Instance inst =
        random_instance(rng, n, ConstraintOracle::k_uniform(n, 1), model);
    const CapValues caps = compute_caps(inst);
    const auto mech = build_shared_cost(inst, caps, t);
    const double opt = exact_opt(inst);
    const auto dp = simulate_interaction(
        inst, mech, {AgentKind::ExactDp, TieBreak::FavorPrincipal}, true, 0,
        RngStream(t), &caps);
    CHECK(dp.del.mean >= 0.125 * opt - 1e-9);
  }
}

TEST_CASE("x equals y shared-cost delegation beats solo search") {
  // With identical interests the principal shifts every cost to the agent,
  // accepts anything feasible, and keeps the full search value.
  std::vector<Element> elems(2);
  for (int i = 0; i < 2; ++i) {
    elems[i].id = i;
    elems[i].dist = FiniteJointDistribution(
        {{4.0 + i, 4.0 + i, 0.5}, {0.0, 0.0, 0.5}});
    elems[i].cost = 0.5;
  }
  UtilityModel model;
  model.kind = ModelKind::SharedCost;
  Instance inst(std::move(elems), ConstraintOracle::k_uniform(2, 1), model);
  const CapValues caps = compute_caps(inst);
  const double opt = exact_opt(inst);
  SingleProposalMechanism mech;
  mech.family.whitelist.assign(2, 1);
  mech.family.rules.assign(2, {0.0, 1.0});
  mech.family.sub = inst.constraint();
  mech.cost_division = inst.full_costs();
  const auto dp = simulate_interaction(
      inst, mech, {AgentKind::ExactDp, TieBreak::FavorPrincipal}, true, 0,
      RngStream(1), &caps);
  CHECK(dp.del.mean > opt);

  // The guaranteed constructor still clears its own factor here.
  const auto guaranteed = build_shared_cost(inst, caps, 0);
  const auto rep = simulate_interaction(
      inst, guaranteed, {AgentKind::ExactDp, TieBreak::FavorPrincipal}, true, 0,
      RngStream(1), &caps);
  CHECK(rep.del.mean >= 0.125 * opt - 1e-9);
}

TEST_CASE("constructors reject mismatched models") {
  const Instance inst =
      binary_instance({{4.0, 2.0, 0.5}}, ConstraintOracle::k_uniform(1, 1));
  const CapValues caps = compute_caps(inst);
  CHECK_THROWS_AS(build_free_agent_kuniform(inst, caps, 0.5), ModelMismatchError);
  CHECK_THROWS_AS(build_shared_cost(inst, caps), ModelMismatchError);
  std::vector<Element> elems(1);
  elems[0].id = 0;
  elems[0].dist = FiniteJointDistribution({{4.0, 4.0, 0.25}, {0.0, 0.0, 0.75}});
  elems[0].cost = 0.5;
  Instance std_inst(std::move(elems), ConstraintOracle::k_uniform(1, 1), {});
  const CapValues caps2 = compute_caps(std_inst);
  CHECK_THROWS_AS(build_binary_matroid(std_inst, caps2), ModelMismatchError);
}
