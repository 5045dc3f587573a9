#include <catch2/catch_amalgamated.hpp>

#include "pandora/agents.hpp"
#include "pandora/harness.hpp"
#include "pandora/solvers.hpp"

using namespace pandora;

TEST_CASE("standard hard family construction") {
  FamilySpec spec;
  spec.id = FamilyId::StdImpossibility;
  spec.n = 4;
  spec.eps = 0.125;
  const Instance inst = generate_family(spec);
  REQUIRE(inst.size() == 4);
  CHECK(inst.cost(0) == 0.875);
  // X is 4 w.p. 1/4; Y is 32 w.p. 1/32, independent.
  const auto mx = inst.element(0).dist.marginal_x();
  CHECK_THAT(mx.upper_mass(0.0), Catch::Matchers::WithinAbs(0.25, 1e-12));
  CHECK(mx.max_value() == 4.0);
  const auto my = inst.element(0).dist.marginal_y();
  CHECK_THAT(my.upper_mass(0.0), Catch::Matchers::WithinAbs(1.0 / 32, 1e-12));
  CHECK(my.max_value() == 32.0);
  CHECK(validate_instance(inst).empty());
  // Cap closed form eps*n.
  const CapValues caps = compute_caps(inst);
  CHECK_THAT(caps.tau_x[0], Catch::Matchers::WithinAbs(0.5, 1e-12));
  // Closed-form optimum matches the exact policy value.
  CHECK_THAT(family_expected_opt(spec),
             Catch::Matchers::WithinAbs(weitzman_expected_exact(inst, caps), 1e-12));
}

TEST_CASE("free-agent hard family construction") {
  FamilySpec spec;
  spec.id = FamilyId::FreeAgentImpossibility;
  spec.n = 16;
  const Instance inst = generate_family(spec);
  CHECK(inst.cost(0) == 0.75);
  const auto mx = inst.element(0).dist.marginal_x();
  CHECK(mx.max_value() == 4.0);
  CHECK_THAT(mx.upper_mass(0.0), Catch::Matchers::WithinAbs(0.25, 1e-12));
  const CapValues caps = compute_caps(inst);
  CHECK_THAT(caps.tau_x[0], Catch::Matchers::WithinAbs(1.0, 1e-12));
  CHECK(validate_instance(inst).empty());
  CHECK_THROWS_AS(
      [] {
        FamilySpec bad;
        bad.id = FamilyId::FreeAgentImpossibility;
        bad.n = 12;
        return generate_family(bad);
      }(),
      BadParametersError);
}

TEST_CASE("shared-cost two-element fixture") {
  FamilySpec spec;
  spec.id = FamilyId::SharedCostHalfGap;
  spec.eps = 0.1;
  const Instance inst = generate_family(spec);
  CHECK(validate_instance(inst).empty());
  // Exact optimum by adaptive enumeration: probe the risky element first,
  // fall back to the sure one: 2 - eps - 2 eps^2 + eps^3.
  const double opt = exact_optimal_dp(inst);
  CHECK_THAT(opt, Catch::Matchers::WithinAbs(1.881, 1e-12));
  // Independent check of that closed form on a second epsilon.
  FamilySpec spec2 = spec;
  spec2.eps = 0.2;
  const double e = 0.2;
  CHECK_THAT(exact_optimal_dp(generate_family(spec2)),
             Catch::Matchers::WithinAbs(2 - e - 2 * e * e + e * e * e, 1e-12));
}

TEST_CASE("agent-agnostic family variants") {
  FamilySpec spec;
  spec.id = FamilyId::AgentAgnosticImpossibility;
  spec.n = 16;
  const Instance all_free = generate_family(spec);
  CHECK(all_free.size() == 16);
  CHECK(all_free.cost(0) == 0.0);  // n = 16 sits at the zero-cost corner
  spec.n = 81;
  spec.positive_division = {0, 1};
  const Instance mixed = generate_family(spec);
  CHECK_THAT(mixed.cost(0), Catch::Matchers::WithinAbs(1.0 - 2.0 / 3.0, 1e-12));
  // Planted prize on the zero outcome for paid elements.
  CHECK(mixed.element(0).dist.marginal_y().max_value() == 81.0 * 81.0);
  CHECK(mixed.element(2).dist.marginal_y().max_value() == 3e9);
  CHECK(validate_instance(mixed).empty());
}

TEST_CASE("brute force finds the dominant pattern and respects symmetry") {
  // One outcome strictly dominating: the best mechanism accepts exactly it.
  std::vector<Element> elems(1);
  elems[0].id = 0;
  elems[0].dist = FiniteJointDistribution({{6.0, 2.0, 0.5}, {1.0, 1.0, 0.5}});
  elems[0].cost = 0.25;
  Instance inst(std::move(elems), ConstraintOracle::k_uniform(1, 1), {});
  const auto res = brute_force_optimal_mechanism(inst);
  // Accepting everything keeps the agent probing and the principal collects
  // the expected value minus cost.
  CHECK_THAT(res.best_del, Catch::Matchers::WithinAbs(3.5 - 0.25, 1e-9));

  RngStream rng(41);
  for (int t = 0; t < 6; ++t) {
    const int n = rng.uniform_int(2, 3);
    Instance r = random_instance(rng, n, ConstraintOracle::k_uniform(n, 1), {}, 2);
    BruteForceOptions sym_on, sym_off;
    sym_off.symmetry = false;
    const auto a = brute_force_optimal_mechanism(r, sym_on);
    const auto b = brute_force_optimal_mechanism(r, sym_off);
    CHECK_THAT(a.best_del, Catch::Matchers::WithinAbs(b.best_del, 1e-9));
  }
}

TEST_CASE("brute force on the standard hard family matches theory") {
  FamilySpec spec;
  spec.id = FamilyId::StdImpossibility;
  spec.n = 4;
  spec.eps = 0.125;
  const Instance inst = generate_family(spec);
  const auto res = brute_force_optimal_mechanism(inst);
  // Best mechanism keeps exactly one element fully acceptable: value eps.
  CHECK_THAT(res.best_del, Catch::Matchers::WithinAbs(0.125, 1e-9));
  CHECK(res.best_del <= 0.125 + 0.125 * 0.125 + 1e-9);
}

TEST_CASE("shared-cost ceiling on the two-element fixture") {
  FamilySpec spec;
  spec.id = FamilyId::SharedCostHalfGap;
  spec.eps = 0.1;
  const Instance inst = generate_family(spec);
  BruteForceOptions opt;
  opt.symmetry = false;
  const auto res = brute_force_optimal_mechanism(inst, opt);
  CHECK(res.best_del <= 1.0 + 1e-6);
  CHECK(res.best_del >= 0.99);
}

TEST_CASE("sweep evaluator agrees with the general brute force at small n") {
  // Standard family, n = 4: the reduced pattern space evaluated by the
  // class-collapsed engine must reproduce the full 16-pattern optimum.
  const double sweep_best = std_family_best_del(4, 0.125, 32.0, 1.0);
  FamilySpec spec;
  spec.id = FamilyId::StdImpossibility;
  spec.n = 4;
  spec.eps = 0.125;
  const auto full = brute_force_optimal_mechanism(generate_family(spec));
  CHECK_THAT(sweep_best, Catch::Matchers::WithinAbs(full.best_del, 1e-9));

  // Discounted shape: both parties pay the scaled cost.
  {
    const double eps = 1.0 / std::pow(4.0, 0.25);
    const double m = 2.0;
    std::vector<Element> elems(4);
    for (int i = 0; i < 4; ++i) {
      elems[i].id = i;
      const double px = 0.25, py = 1.0 / m;
      elems[i].dist = FiniteJointDistribution({{4.0, m, px * py},
                                               {4.0, 0.0, px * (1 - py)},
                                               {0.0, m, (1 - px) * py},
                                               {0.0, 0.0, (1 - px) * (1 - py)}});
      elems[i].cost = 1.0 - eps;
    }
    UtilityModel model;
    model.discount = 0.5;  // both pay half
    Instance inst(std::move(elems), ConstraintOracle::k_uniform(4, 1), model);
    const auto full = brute_force_optimal_mechanism(inst);
    CHECK_THAT(std_family_best_del(4, eps, m, 0.5),
               Catch::Matchers::WithinAbs(full.best_del, 1e-9));
  }

  // Free-agent family shape at a small scale with a common tiny agent prize.
  const double fa_sweep = free_agent_family_best_del(4, 1e9);
  {
    const double p = 1.0 / std::pow(4.0, 0.25);
    std::vector<Element> elems(4);
    for (int i = 0; i < 4; ++i) {
      elems[i].id = i;
      elems[i].dist = FiniteJointDistribution({{1.0 / (p * p), 1e-6, p * p / 2},
                                               {1.0 / (p * p), 1e9, p * p / 2},
                                               {0.0, 1e-6, (1 - p * p) / 2},
                                               {0.0, 1e9, (1 - p * p) / 2}});
      elems[i].cost = 1.0 - p / 2.0;
    }
    UtilityModel model;
    model.kind = ModelKind::FreeAgent;
    Instance inst(std::move(elems), ConstraintOracle::k_uniform(4, 1), model);
    const auto full_fa = brute_force_optimal_mechanism(inst);
    CHECK_THAT(fa_sweep, Catch::Matchers::WithinAbs(full_fa.best_del, 1e-9));
  }
}

TEST_CASE("gap sweep ratios decay on the hard families") {
  const auto rows = gap_sweep(FamilyId::StdImpossibility, {4, 9, 16}, 7);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].ratio > rows[1].ratio);
  CHECK(rows[1].ratio > rows[2].ratio);
  CHECK(fit_loglog_slope(rows) < -0.8);
  for (const auto& r : rows) CHECK(r.e_del <= r.e_opt);
}

TEST_CASE("guaranteed mechanisms hold their constants in the sweep") {
  for (FamilyId id : {FamilyId::RandomMatroid, FamilyId::RandomKnapsack}) {
    const auto rows = gap_sweep(id, {3, 4, 5}, 11);
    const double alpha =
        id == FamilyId::RandomMatroid ? 0.25 : 1.5 - std::sqrt(2.0);
    for (const auto& r : rows) CHECK(r.ratio >= alpha - 1e-9);
  }
}
