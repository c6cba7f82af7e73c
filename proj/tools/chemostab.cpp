// Command-line front end: simulate, inspect stability, compute thresholds, run
// the envelope ODE, named scenarios, parameter sweeps and inequality fuzzing.
//
// Exit status: 0 success / verdict pass, 1 verdict fail or runtime error,
// 2 bad usage, bad config, unmet hypotheses or I/O failure.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "chemostab/config.hpp"
#include "chemostab/diagnostics.hpp"
#include "chemostab/error.hpp"
#include "chemostab/integrator.hpp"
#include "chemostab/rectangle.hpp"
#include "chemostab/report.hpp"
#include "chemostab/scenario.hpp"
#include "chemostab/stability.hpp"
#include "chemostab/thresholds.hpp"

using namespace chemostab;

namespace {

Config load_config(const std::string& path, const std::vector<std::string>& overrides) {
  Config cfg = path.empty() ? Config{} : Config::load(path);
  for (const auto& o : overrides) cfg.set_assignment(o);
  return cfg;
}

Equilibrium equilibrium_from(const Config& cfg, const ModelParams& p) {
  return p.is_minimal() ? equilibrium(p, cfg.get_double("u_star", 1.0)) : equilibrium(p);
}

int cmd_simulate(const Config& cfg) {
  const ModelParams p = params_from(cfg);
  const GridDomain grid = grid_from(cfg);
  const std::uint64_t seed = seed_from(cfg);
  const FieldState init = init_state(grid, p, init_from(cfg, grid, p, seed));
  const Trajectory traj = run(p, grid, init, step_from(cfg));

  const std::string stem =
      cfg.get_string("output.dir", ".") + "/" + cfg.get_string("output.name", "run");
  std::ostringstream csv;
  write_trajectory_csv(csv, traj);
  write_file(stem + "_trajectory.csv", csv.str());
  write_snapshots(stem + "_snapshots", traj,
                  parse_snapshot_format(cfg.get_string("output.snapshots", "none")));

  const auto& last = traj.samples.back();
  Json out{{"parameters", to_json(p)},
           {"u_star", traj.eq.u_star},
           {"v_star", traj.eq.v_star},
           {"steps", traj.steps},
           {"clip_count", traj.clip_count},
           {"final_time", last.t},
           {"final_err_inf", last.err_inf},
           {"trajectory", stem + "_trajectory.csv"}};
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_stability(const Config& cfg) {
  const ModelParams p = params_from(cfg);
  const GridDomain grid = grid_from(cfg);
  const Equilibrium eq = equilibrium_from(cfg, p);
  const StabilityReport rep = classify_equilibrium(p, eq, neumann_eigenvalues(grid, 1000));
  Json out = to_json(rep);
  out["u_star"] = eq.u_star;
  out["v_star"] = eq.v_star;
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_thresholds(Config cfg, const std::string& c_star_table, double m0) {
  if (!c_star_table.empty()) cfg.set("thresholds.c_star_table", c_star_table);
  if (!std::isnan(m0)) cfg.set("thresholds.m0", format_double(m0));
  const ModelParams p = params_from(cfg);
  const GridDomain grid = grid_from(cfg);
  const Equilibrium eq = equilibrium_from(cfg, p);

  const ThresholdInputs in = threshold_inputs_from(cfg, p, grid, seed_from(cfg));
  std::cout << to_json(compute_thresholds(p, eq, grid, in)).dump(2) << "\n";
  return 0;
}

int cmd_rectangle(const Config& cfg) {
  const ModelParams p = params_from(cfg);
  const GridDomain grid = grid_from(cfg);
  const Equilibrium eq = equilibrium(p);
  std::optional<M0Value> m0;
  if (const auto v = cfg.find_double("thresholds.m0")) {
    m0 = M0Value{*v, Provenance::UserSupplied};
  } else if (p.beta > 0.0) {
    std::mt19937_64 rng(seed_from(cfg));
    const auto samples = static_cast<std::size_t>(cfg.get_int("thresholds.m0_samples", 200));
    m0 = M0Value{estimate_m0(grid, p.mu, p.nu, samples, rng), Provenance::Empirical};
  }
  const Normalization norm = normalize(p, eq, m0);
  const FieldState init = init_state(grid, p, init_from(cfg, grid, p, seed_from(cfg)));
  const auto env = integrate_rectangle(envelope_start(init.u, eq.u_star), norm.rp,
                                       cfg.get_double("rectangle.t_end", 10.0),
                                       cfg.get_double("rectangle.dt", 1e-3));
  std::cerr << "kappa0 = " << format_double(norm.rp.kappa0)
            << ", contraction hypothesis " << (norm.rp.contraction ? "holds" : "fails") << "\n";
  CsvTable t;
  t.header = {"tau", "ubar", "ulow", "logdiff"};
  for (const auto& s : env)
    t.rows.push_back({s.t, s.ubar, s.ulow, std::log(s.ubar) - std::log(s.ulow)});
  write_csv(std::cout, t);
  return 0;
}

int cmd_scenario(const std::string& name, const Config& cfg, std::optional<std::uint64_t> seed) {
  const ScenarioOutcome out = run_scenario(name, cfg, seed ? *seed : seed_from(cfg));
  std::cout << out.verdict.dump(2) << "\n";
  return out.pass ? 0 : 1;
}

int cmd_sweep(const Config& cfg) {
  write_csv(std::cout, sweep_table(cfg, seed_from(cfg)));
  return 0;
}

int cmd_fuzz(std::size_t trials, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const InequalityFuzzReport pd = check_power_diff_inequality(trials, rng);
  Json out{{"seed", seed},
           {"power_difference",
            {{"trials", pd.trials}, {"violations", pd.violations}, {"worst_ratio", pd.worst_ratio}}},
           {"orderings", Json::array()}};
  std::size_t violations = pd.violations;
  for (auto part : {OrderingPart::First, OrderingPart::Second, OrderingPart::Third,
                    OrderingPart::Fourth, OrderingPart::Minimal}) {
    const OrderingReport r = verify_orderings(part, trials, rng);
    violations += r.violations;
    Json j{{"part", std::string(to_string(part))},
           {"trials", r.trials},
           {"checked", r.checked},
           {"skipped", r.skipped},
           {"violations", r.violations}};
    if (!r.violation_tuples.empty()) j["violation_tuples"] = r.violation_tuples;
    out["orderings"].push_back(j);
  }
  out["pass"] = violations == 0;
  std::cout << out.dump(2) << "\n";
  return violations == 0 ? 0 : 1;
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ConfigError:
    case ErrorKind::HypothesisNotMet:
    case ErrorKind::HypothesisViolated:
    case ErrorKind::IoError:
      return 2;
    default:
      return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Chemotaxis-consumption model: simulation, stability and threshold tools"};
  app.require_subcommand(1);
  std::vector<std::string> overrides;
  app.add_option("--set", overrides, "Override a config entry, key=value (repeatable)");

  std::string config;
  auto* sim = app.add_subcommand("simulate", "Integrate the PDE and write a trajectory CSV");
  sim->add_option("config", config, "Config file")->required()->check(CLI::ExistingFile);

  auto* stab = app.add_subcommand("stability", "Linear stability report (JSON)");
  stab->add_option("config", config, "Config file")->required()->check(CLI::ExistingFile);

  std::string c_star_table;
  double m0 = std::nan("");
  auto* thr = app.add_subcommand("thresholds", "Explicit sensitivity thresholds (JSON)");
  thr->add_option("config", config, "Config file")->required()->check(CLI::ExistingFile);
  thr->add_option("--c-star-table", c_star_table, "Two-column p,C table for the embedding constant");
  thr->add_option("--m0", m0, "Gradient constant M0 (otherwise estimated)");

  auto* rect = app.add_subcommand("rectangle", "Integrate the envelope ODE (CSV on stdout)");
  rect->add_option("config", config, "Config file")->required()->check(CLI::ExistingFile);

  std::string name;
  std::optional<std::uint64_t> seed;
  auto* scen = app.add_subcommand("scenario", "Run a named experiment and write its verdict");
  scen->add_option("name", name, "Scenario name")
      ->required()
      ->check(CLI::IsMember(scenario_names()));
  scen->add_option("config", config, "Config file with overrides")->check(CLI::ExistingFile);
  scen->add_option("--seed", seed, "Random seed");

  auto* sw = app.add_subcommand("sweep", "Threshold sweep over sweep.* axes (CSV on stdout)");
  sw->add_option("config", config, "Config file")->required()->check(CLI::ExistingFile);

  std::size_t trials = 100000;
  std::uint64_t fuzz_seed = 1;
  auto* fuzz = app.add_subcommand("fuzz", "Random checks of the threshold inequalities");
  fuzz->add_option("--trials", trials, "Trials per check")->check(CLI::PositiveNumber);
  fuzz->add_option("--seed", fuzz_seed, "Random seed");

  for (auto* sub : {sim, stab, thr, rect, scen, sw})
    sub->add_option("--set", overrides, "Override a config entry, key=value (repeatable)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*fuzz) return cmd_fuzz(trials, fuzz_seed);
    const Config cfg = load_config(config, overrides);
    if (*sim) return cmd_simulate(cfg);
    if (*stab) return cmd_stability(cfg);
    if (*thr) return cmd_thresholds(cfg, c_star_table, m0);
    if (*rect) return cmd_rectangle(cfg);
    if (*scen) return cmd_scenario(name, cfg, seed);
    return cmd_sweep(cfg);
  } catch (const Error& e) {
    std::cerr << "error [" << to_string(e.kind()) << "]: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
