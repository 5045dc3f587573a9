// Command-line front end: validate instances, solve the non-delegated
// benchmarks, build and evaluate delegation mechanisms, certify OCRS
// selectability, dump instance families, and run delegation-gap sweeps.
// Every sampled command requires an explicit seed and produces byte-identical
// output for any --jobs value.

#include <chrono>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pandora/agents.hpp"
#include "pandora/harness.hpp"
#include "pandora/json_io.hpp"
#include "pandora/mechanisms.hpp"
#include "pandora/report.hpp"

using namespace pandora;
using nlohmann::json;

namespace {

struct CommonOpts {
  std::string instance_path;
  std::string family;
  std::vector<std::string> params;
  std::string out;
  std::string format = "json";
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::size_t samples = 10000;
  bool exact = false;
  int jobs = 1;
  bool timings = false;
};

FamilySpec parse_family_spec(const CommonOpts& opts) {
  FamilySpec spec;
  if (!family_from_string(opts.family, spec.id))
    throw BadParametersError("unknown family: " + opts.family);
  spec.seed = opts.seed;
  for (const auto& kv : opts.params) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw BadParametersError("expected key=value parameter, got: " + kv);
    const std::string key = kv.substr(0, eq);
    const std::string val = kv.substr(eq + 1);
    if (key == "n")
      spec.n = std::stoi(val);
    else if (key == "eps")
      spec.eps = std::stod(val);
    else if (key == "delta")
      spec.delta = std::stod(val);
    else if (key == "sentinel")
      spec.sentinel = std::stod(val);
    else
      throw BadParametersError("unknown family parameter: " + key);
  }
  return spec;
}

Instance load_target(const CommonOpts& opts) {
  if (!opts.instance_path.empty()) return load_instance(opts.instance_path);
  if (!opts.family.empty()) return generate_family(parse_family_spec(opts));
  throw BadParametersError("needs --instance or --family");
}

json config_echo(const std::string& cmd, const CommonOpts& opts) {
  json j;
  j["command"] = cmd;
  if (!opts.instance_path.empty()) j["instance"] = opts.instance_path;
  if (!opts.family.empty()) j["family"] = opts.family;
  if (!opts.params.empty()) j["params"] = opts.params;
  j["seed"] = opts.seed;
  j["samples"] = opts.samples;
  j["exact"] = opts.exact;
  j["jobs"] = opts.jobs;
  return j;
}

json estimate_json(const Estimate& e) {
  json j;
  j["mean"] = e.mean;
  j["lo"] = e.lo;
  j["hi"] = e.hi;
  j["exact"] = e.exact;
  if (!e.exact) j["samples"] = e.samples;
  return j;
}

void add_common(CLI::App* sub, CommonOpts& opts, bool needs_seed) {
  sub->add_option("--instance", opts.instance_path, "instance JSON path");
  sub->add_option("--family", opts.family, "named instance family");
  sub->add_option("--params", opts.params, "family parameters key=value");
  sub->add_option("--out", opts.out, "output path, stdout when omitted");
  sub->add_option("--format", opts.format, "json|csv");
  auto* seed =
      sub->add_option("--seed", opts.seed, "master seed, mandatory for sampled runs");
  if (needs_seed) seed->required();
  sub->add_option("--samples", opts.samples, "Monte Carlo sample count");
  sub->add_flag("--exact", opts.exact, "force exact enumeration");
  sub->add_option("--jobs", opts.jobs, "worker threads");
  sub->add_flag("--timings", opts.timings,
                "include wall-clock timings (breaks byte determinism)");
}

double profile_space(const Instance& inst) {
  double combos = 1.0;
  for (int i = 0; i < inst.size(); ++i)
    combos *= static_cast<double>(inst.element(i).dist.support_size());
  return combos;
}

int run_validate(const CommonOpts& opts) {
  const Instance inst = load_target(opts);
  const auto report = validate_instance(inst);
  json j;
  j["schema_version"] = kSchemaVersion;
  j["config"] = config_echo("validate", opts);
  j["violations"] = report;
  j["valid"] = report.empty();
  write_output(opts.out, j.dump(2) + "\n");
  return report.empty() ? 0 : 2;
}

int run_solve(const CommonOpts& opts) {
  const Instance inst = load_target(opts);
  const CapValues caps = compute_caps(inst);
  json j;
  j["schema_version"] = kSchemaVersion;
  j["config"] = config_echo("solve", opts);
  const double combos = profile_space(inst);
  const double dp_states = combos * std::pow(2.0, inst.size());
  if (dp_states <= 1e7)
    j["opt_dp"] = exact_optimal_dp(inst);
  else
    j["opt_dp"] = nullptr;
  if (inst.constraint().is_matroid_kind()) {
    if (combos <= 1e6) {
      j["weitzman"] = weitzman_expected_exact(inst, caps);
      j["weitzman_exact"] = true;
    } else {
      std::vector<double> vals(opts.samples);
      RngStream rng(opts.seed, 1);
      const std::uint64_t base = rng.next_u64();
      parallel_for(opts.jobs, opts.samples, [&](std::size_t s) {
        RngStream local(base, s);
        const RealizationProfile prof = sample_profile(inst, local);
        vals[s] = generalized_weitzman_policy(inst, caps, prof).utility;
      });
      double mean = 0.0;
      for (double v : vals) mean += v;
      j["weitzman"] = mean / static_cast<double>(opts.samples);
      j["weitzman_exact"] = false;
    }
  } else {
    j["weitzman"] = nullptr;
  }
  const auto sur =
      opt_surrogate(inst, caps, opts.samples, RngStream(opts.seed, 2),
                    opts.exact || combos <= 1e6, 1e6, opts.jobs);
  j["surrogate"] = {sur.mean, sur.lo, sur.hi};
  j["surrogate_exact"] = sur.exact;
  j["seed"] = opts.seed;
  write_output(opts.out, j.dump(2) + "\n");
  return 0;
}

SingleProposalMechanism build_mechanism(const Instance& inst, const CapValues& caps,
                                        const std::string& which, double delta,
                                        const std::string& knap_class,
                                        const CommonOpts& opts) {
  std::string name = which;
  if (name == "auto") {
    switch (inst.model().kind) {
      case ModelKind::Binary: name = "binary"; break;
      case ModelKind::SharedCost: name = "shared"; break;
      case ModelKind::FreeAgent:
        name = inst.constraint().kind() == ConstraintKind::KUniform ? "threshold"
                                                                    : "ocrs";
        break;
      default:
        throw BadParametersError(
            "no default mechanism for the standard model; pass --mechanism");
    }
  }
  std::optional<KnapsackClass> cls;
  if (knap_class == "small") cls = KnapsackClass::Small;
  if (knap_class == "big") cls = KnapsackClass::Big;
  if (name == "binary") return build_binary_matroid(inst, caps);
  if (name == "threshold") return build_free_agent_kuniform(inst, caps, delta);
  if (name == "ocrs") {
    const auto p = ex_ante_membership(inst, caps, opts.samples,
                                      RngStream(opts.seed, 3), true, 1e6, opts.jobs);
    return build_free_agent_ocrs(inst, caps, p.p, cls);
  }
  if (name == "shared") return build_shared_cost(inst, caps, opts.seed);
  throw BadParametersError("unknown mechanism: " + name);
}

int run_delegate(const CommonOpts& opts, const std::string& mechanism,
                 const std::string& agent, double delta,
                 const std::string& knap_class, const std::string& traces_path) {
  const Instance inst = load_target(opts);
  const CapValues caps = compute_caps(inst);
  const auto mech = build_mechanism(inst, caps, mechanism, delta, knap_class, opts);

  AgentPolicy policy;
  if (agent == "dp")
    policy = {AgentKind::ExactDp, TieBreak::FavorPrincipal};
  else if (agent == "index")
    policy = {AgentKind::WeitzmanIndex, TieBreak::FavorPrincipal};
  else if (agent == "adversarial")
    policy = {AgentKind::AdversarialMaximal, TieBreak::AgainstPrincipal};
  else if (agent == "favor")
    policy = {AgentKind::FavorPrincipalMaximal, TieBreak::FavorPrincipal};
  else if (agent == "prescribed")
    policy = {AgentKind::PrescribedThreshold, TieBreak::FavorPrincipal};
  else
    throw BadParametersError("unknown agent kind: " + agent);

  const bool exact = opts.exact || (policy.kind == AgentKind::ExactDp) ||
                     profile_space(inst) <= 4096;
  const auto rep = simulate_interaction(inst, mech, policy, exact, opts.samples,
                                        RngStream(opts.seed, 4), &caps, opts.jobs);
  json j;
  j["schema_version"] = kSchemaVersion;
  j["config"] = config_echo("delegate", opts);
  j["mechanism"] = mechanism_to_json(mech);
  j["agent"] = agent;
  j["del"] = estimate_json(rep.del);
  j["agent_utility"] = estimate_json(rep.agent);
  if (rep.heuristic_adversary) j["heuristic_adversary"] = true;
  j["seed"] = opts.seed;
  if (!traces_path.empty() && policy.kind != AgentKind::ExactDp) {
    const MechanismView view = make_view(inst, mech);
    std::string lines;
    RngStream rng(opts.seed, 5);
    const std::size_t count = std::min<std::size_t>(opts.samples, 256);
    for (std::size_t s = 0; s < count; ++s) {
      const RealizationProfile prof = sample_profile(inst, rng);
      AgentPlay play;
      bool heuristic = false;
      switch (policy.kind) {
        case AgentKind::WeitzmanIndex:
          play = weitzman_index_agent(inst, mech, view, prof, policy.tie);
          break;
        case AgentKind::AdversarialMaximal:
          play = worst_case_free_agent(inst, mech, prof, &heuristic);
          break;
        case AgentKind::FavorPrincipalMaximal:
          play = favor_principal_maximal_agent(inst, mech, view, prof);
          break;
        default:
          play = prescribed_threshold_agent(inst, mech, caps, prof);
          break;
      }
      json row;
      row["atoms"] = prof.atom;
      row["probed"] = play.probed;
      row["proposal"] = play.proposal;
      row["accepted"] = mech.accepts(inst, prof, play.proposal);
      lines += row.dump() + "\n";
    }
    write_output(traces_path, lines);
    j["traces"] = traces_path;
  }
  write_output(opts.out, j.dump(2) + "\n");
  return 0;
}

int run_selectability(const CommonOpts& opts, const std::string& knap_class) {
  const Instance inst = load_target(opts);
  const CapValues caps = compute_caps(inst);
  const auto p = ex_ante_membership(inst, caps, opts.samples, RngStream(opts.seed, 6),
                                    true, 1e6, opts.jobs);
  std::optional<KnapsackClass> cls;
  if (inst.constraint().kind() == ConstraintKind::Knapsack)
    cls = knap_class == "big" ? KnapsackClass::Big : KnapsackClass::Small;
  std::vector<double> active(p.p.size());
  const double b = inst.constraint().kind() == ConstraintKind::Knapsack
                       ? 1.0 - 1.0 / std::sqrt(2.0)
                       : 0.5;
  for (std::size_t i = 0; i < p.p.size(); ++i) active[i] = b * p.p[i];
  const auto fam = build_greedy_ocrs(inst, caps, active, cls);
  const bool exhaustive = opts.exact || inst.size() <= 8;
  const auto rep = estimate_selectability(fam, active, exhaustive, opts.samples,
                                          RngStream(opts.seed, 7), opts.jobs);
  std::string out;
  out += "# schema_version=" + std::to_string(kSchemaVersion) + "\n";
  out += "# config=" + config_echo("selectability", opts).dump() + "\n";
  out += "element_id,estimate,mode,samples,seed\n";
  const std::string mode = rep.exhaustive
                               ? "exhaustive"
                               : (rep.heuristic_adversary ? "sampled_heuristic"
                                                          : "sampled");
  for (int i = 0; i < inst.size(); ++i) {
    out += std::to_string(i) + "," + format_double(rep.per_element[i]) + "," +
           mode + "," + std::to_string(rep.exhaustive ? 0 : rep.samples) + "," +
           std::to_string(opts.seed) + "\n";
  }
  write_output(opts.out, out);
  return 0;
}

int run_family(const CommonOpts& opts) {
  const FamilySpec spec = parse_family_spec(opts);
  const Instance inst = generate_family(spec);
  json j = instance_to_json(inst);
  j["schema_version"] = kSchemaVersion;
  write_output(opts.out, j.dump(2) + "\n");
  return 0;
}

int run_gap(const CommonOpts& opts, const std::string& ns_arg) {
  FamilySpec spec = parse_family_spec(opts);
  std::vector<int> ns;
  std::string token;
  for (char c : ns_arg + ",") {
    if (c == ',') {
      if (!token.empty()) ns.push_back(std::stoi(token));
      token.clear();
    } else {
      token += c;
    }
  }
  if (ns.empty()) throw BadParametersError("--n needs at least one size");
  const auto t0 = std::chrono::steady_clock::now();
  auto rows = gap_sweep(spec.id, ns, opts.seed, opts.jobs);
  if (opts.timings) {
    const auto t1 = std::chrono::steady_clock::now();
    const double ms =
        std::chrono::duration_cast<std::chrono::microseconds>(t1 - t0).count() /
        1000.0;
    for (auto& r : rows) r.wall_ms = ms / static_cast<double>(rows.size());
  }
  if (opts.format == "csv") {
    write_output(opts.out, gap_rows_csv(rows, config_echo("gap", opts).dump()));
  } else {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["config"] = config_echo("gap", opts);
    j["rows"] = gap_rows_json(rows);
    j["loglog_slope"] = fit_loglog_slope(rows);
    write_output(opts.out, j.dump(2) + "\n");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"delegated search simulator"};
  app.require_subcommand(1);

  CommonOpts v_opts, s_opts, d_opts, sel_opts, f_opts, g_opts;
  std::string mechanism = "auto", agent = "dp", knap_class = "small";
  std::string traces_path, ns_arg;
  double delta = 0.5;

  auto* validate = app.add_subcommand("validate", "check instance invariants");
  add_common(validate, v_opts, false);

  auto* solve = app.add_subcommand("solve", "non-delegated benchmarks");
  add_common(solve, s_opts, true);

  auto* delegate = app.add_subcommand("delegate", "build and evaluate a mechanism");
  add_common(delegate, d_opts, true);
  delegate->add_option("--mechanism", mechanism,
                       "auto|binary|threshold|ocrs|shared");
  delegate->add_option("--agent", agent, "dp|index|adversarial|favor|prescribed");
  delegate->add_option("--delta", delta, "discount for the threshold mechanism");
  delegate->add_option("--class", knap_class, "knapsack class: small|big");
  delegate->add_option("--traces", traces_path, "write play traces (jsonl)");

  auto* selectability =
      app.add_subcommand("selectability", "per-element OCRS selectability");
  add_common(selectability, sel_opts, true);
  selectability->add_option("--class", knap_class, "knapsack class: small|big");

  auto* family = app.add_subcommand("family", "dump a generated instance");
  add_common(family, f_opts, false);

  auto* gap = app.add_subcommand("gap", "delegation-gap sweep");
  add_common(gap, g_opts, true);
  gap->add_option("--n", ns_arg, "comma-separated sizes")->required();

  try {
    app.parse(argc, argv);
    if (validate->parsed()) return run_validate(v_opts);
    if (solve->parsed()) return run_solve(s_opts);
    if (delegate->parsed())
      return run_delegate(d_opts, mechanism, agent, delta, knap_class, traces_path);
    if (selectability->parsed()) return run_selectability(sel_opts, knap_class);
    if (family->parsed()) return run_family(f_opts);
    if (gap->parsed()) return run_gap(g_opts, ns_arg);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const TooLargeError& e) {
    std::cerr << "guard violation: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
