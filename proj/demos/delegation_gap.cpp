// Builds a small free-agent instance, constructs the OCRS-backed mechanism,
// and prints how the delegated value compares with solving alone.

#include <cstdio>

#include "pandora/agents.hpp"
#include "pandora/harness.hpp"

using namespace pandora;

int main() {
  RngStream rng(7, 0);
  UtilityModel model;
  model.kind = ModelKind::FreeAgent;
  const Instance inst =
      random_instance(rng, 4, random_matroid_constraint(rng, 4), model);
  const CapValues caps = compute_caps(inst);

  const double opt = exact_optimal_dp(inst);
  const auto p = ex_ante_membership(inst, caps, 0, RngStream(7, 1), true, 1e6);
  const auto mech = build_free_agent_ocrs(inst, caps, p.p);

  const auto worst = simulate_interaction(
      inst, mech, {AgentKind::AdversarialMaximal, TieBreak::AgainstPrincipal},
      true, 0, RngStream(7, 2), &caps);
  const auto friendly = simulate_interaction(
      inst, mech, {AgentKind::FavorPrincipalMaximal, TieBreak::FavorPrincipal},
      true, 0, RngStream(7, 3), &caps);

  std::printf("non-delegated optimum:        %.6f\n", opt);
  std::printf("delegated, worst-case agent:  %.6f (ratio %.3f, floor %.3f)\n",
              worst.del.mean, worst.del.mean / opt, mech.alpha);
  std::printf("delegated, friendly agent:    %.6f (ratio %.3f)\n",
              friendly.del.mean, friendly.del.mean / opt);
  return 0;
}
