#include "chemostab/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <sstream>

#include <fmt/format.h>

#include "chemostab/diagnostics.hpp"
#include "chemostab/error.hpp"
#include "chemostab/integrator.hpp"
#include "chemostab/rectangle.hpp"
#include "chemostab/stability.hpp"
#include "chemostab/thresholds.hpp"

namespace chemostab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const std::map<std::string, std::string>& preset_text() {
  // Shared baseline: unit coefficients on [0, π] with 256 cells.
  static const std::map<std::string, std::string> presets = {
      {"persistence",
       "a = 2\nb = 1\nchi0 = 1\nbeta = 1\n[init]\nkind = cosine\nu_star = 0.5\nepsilon = 0.5\n"
       "[time]\nt_end = 40\noutput_stride = 10\n"},
      {"negative-sensitivity",
       "chi0 = -1\n[init]\nkind = cosine\nepsilon = 0.5\n[time]\nt_end = 50\noutput_stride = 5\n"},
      {"stable-dichotomy",
       "[init]\nkind = cosine\nepsilon = 0.01\n[time]\nt_end = 100\noutput_stride = 5\n"
       "[scenario]\nchi0_fraction = 0.875\n"},
      {"unstable-dichotomy",
       "[init]\nkind = cosine\nepsilon = 0.01\n[time]\nt_end = 100\noutput_stride = 5\n"
       "[scenario]\nchi0_fraction = 1.125\n"},
      {"lyapunov-i",
       "beta = 1\n[init]\nkind = cosine\nepsilon = 0.5\n[time]\nt_end = 20\noutput_stride = 1\n"
       "[scenario]\nchi0_fraction = 0.5\n"},
      {"lyapunov-ii",
       "beta = 1\n[init]\nkind = cosine\nepsilon = 0.5\n[time]\nt_end = 50\noutput_stride = 5\n"
       "[scenario]\nchi0_fraction = 0.5\n"},
      {"rectangle-iii",
       "beta = 0\n[init]\nkind = cosine\nepsilon = 0.5\n[time]\nt_end = 100\noutput_stride = 10\n"
       "[scenario]\nchi0_fraction = 0.8\n"},
      {"rectangle-iv",
       "beta = 1\nalpha = 2\n[init]\nkind = cosine\nepsilon = 0.5\n[time]\nt_end = 100\n"
       "output_stride = 10\n[scenario]\nchi0_fraction = 0.8\n"},
      {"minimal-entropy",
       "a = 0\nb = 0\nbeta = 1\nu_star = 1\n[init]\nkind = cosine\nepsilon = 0.5\n[time]\n"
       "t_end = 50\noutput_stride = 5\n[minimal]\ncalibration_time = 20\n"
       "[scenario]\nchi0_fraction = 0.5\n"},
      {"minimal-akl",
       "a = 0\nb = 0\nbeta = 1\nu_star = 1\n[init]\nkind = cosine\nepsilon = 0.5\n[time]\n"
       "t_end = 50\noutput_stride = 5\n[minimal]\ncalibration_time = 20\n"
       "[scenario]\nchi0_fraction = 0.5\n"},
      {"thresholds-only", "beta = 1\n"},
      {"sweep", "chi0 = 0\n[sweep]\nbeta = 1, 2, 4, 8, 16\n"},
  };
  return presets;
}

std::string theorem_label(const std::string& name) {
  static const std::map<std::string, std::string> labels = {
      {"persistence", "uniform persistence with explicit eventual lower bounds"},
      {"negative-sensitivity", "global stability under repulsive sensitivity"},
      {"stable-dichotomy", "linear stability below the critical sensitivity"},
      {"unstable-dichotomy", "linear instability above the critical sensitivity"},
      {"lyapunov-i", "global stability below the first explicit threshold (Lyapunov functional)"},
      {"lyapunov-ii", "global stability below the second explicit threshold (signal floor)"},
      {"rectangle-iii", "global stability below the third explicit threshold (envelope ODE)"},
      {"rectangle-iv", "global stability below the fourth explicit threshold (envelope ODE)"},
      {"minimal-entropy", "mass-conserving model: stability below the first minimal threshold"},
      {"minimal-akl", "mass-conserving model: stability below the second minimal threshold"},
      {"thresholds-only", "explicit thresholds and their ordering against the critical value"},
      {"sweep", "threshold sweep"},
  };
  return labels.at(name);
}

class Gate {
 public:
  void need(bool ok, std::string text) { checks_.push_back({std::move(text), ok}); }

  void enforce(const std::string& scenario) const {
    std::string failed;
    for (const auto& c : checks_)
      if (!c.holds) failed += (failed.empty() ? "" : "; ") + c.text;
    if (!failed.empty())
      throw Error(ErrorKind::HypothesisNotMet, scenario + ": hypothesis fails: " + failed);
  }

  Json json() const {
    Json arr = Json::array();
    for (const auto& c : checks_) arr.push_back(Json{{"text", c.text}, {"holds", c.holds}});
    return arr;
  }

 private:
  std::vector<HypothesisCheck> checks_;
};

struct Setup {
  std::string name;
  Config merged;
  bool user_chi0;
  ModelParams params;
  GridDomain grid;
  StepConfig step;
  std::uint64_t seed;
  std::string dir;
};

Setup make_setup(const std::string& name, const Config& user, std::uint64_t seed) {
  // A user-supplied sweep replaces the preset axes instead of adding to them.
  const bool user_axes = !user.keys_with_prefix("sweep.").empty();
  const Config preset = scenario_preset(name);
  Config merged;
  for (const auto& [k, v] : preset.entries())
    if (!(user_axes && k.rfind("sweep.", 0) == 0)) merged.set(k, v);
  for (const auto& [k, v] : user.entries()) merged.set(k, v);
  Setup s{name, merged, user.has("chi0"), params_from(merged), grid_from(merged),
          step_from(merged), seed, merged.get_string("output.dir", ".")};
  return s;
}

std::string path_for(const Setup& s, const std::string& suffix) {
  return s.dir + "/" + s.name + suffix;
}

/// Picks χ0 = fraction · threshold unless the user fixed χ0.
void resolve_chi0(Setup& s, double threshold) {
  if (s.user_chi0) return;
  if (const auto f = s.merged.find_double("scenario.chi0_fraction")) s.params.chi0 = *f * threshold;
}

FieldState initial_state(const Setup& s, const ModelParams& p) {
  return init_state(s.grid, p, init_from(s.merged, s.grid, p, s.seed));
}

double mean_of(const Field& u) {
  return kernels::sum(kernels::Exec::Serial, u) / static_cast<double>(u.size());
}

Equilibrium equilibrium_for(const ModelParams& p, const FieldState& init) {
  return p.is_minimal() ? equilibrium(p, mean_of(init.u)) : equilibrium(p);
}

Trajectory simulate(const Setup& s, const ModelParams& p, const FieldState& init,
                    bool keep_fields) {
  StepConfig cfg = s.step;
  if (keep_fields && cfg.snapshot_stride == 0) cfg.snapshot_stride = cfg.output_stride;
  return run(p, s.grid, init, cfg);
}

std::optional<M0Value> m0_for(const Setup& s, const ModelParams& p) {
  if (const auto v = s.merged.find_double("thresholds.m0"))
    return M0Value{*v, Provenance::UserSupplied};
  if (p.beta == 0.0) return std::nullopt;
  std::mt19937_64 rng(s.seed);
  const auto samples = static_cast<std::size_t>(s.merged.get_int("thresholds.m0_samples", 200));
  return M0Value{estimate_m0(s.grid, p.mu, p.nu, samples, rng), Provenance::Empirical};
}

std::array<ThresholdEntry, 4> double_star_for(const Setup& s, const ModelParams& p,
                                              const Equilibrium& eq,
                                              const std::optional<M0Value>& m0) {
  const SpectrumTable spec = neumann_eigenvalues(s.grid, 2);
  const AuxConstants aux =
      aux_constants(p, eq, s.grid.dimension(), spec.lambda_star(), m0, std::nullopt);
  return chi_double_star(p, eq, aux);
}

std::vector<double> times_of(const Trajectory& t) {
  std::vector<double> out;
  for (const auto& s : t.samples) out.push_back(s.t);
  return out;
}

std::vector<double> errors_of(const Trajectory& t) {
  std::vector<double> out;
  for (const auto& s : t.samples) out.push_back(s.err_inf);
  return out;
}

/// Fitted decay rate of ‖u − u*‖∞, NaN when the window is empty.
double fitted_rate(const Trajectory& t) {
  try {
    return fit_decay_rate(times_of(t), errors_of(t)).rate;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::WindowEmpty) throw;
    return kNaN;
  }
}

CsvTable diagnostics_table(const Trajectory& traj) {
  CsvTable table;
  table.header = {"t", "lyapunov", "dissipation", "cumulative_dissipation", "rel_mass_drift",
                  "v_energy"};
  const double mass0 = traj.samples.front().mass;
  double cumulative = 0.0;
  for (std::size_t k = 0; k < traj.samples.size(); ++k) {
    const auto& s = traj.samples[k];
    if (k > 0) {
      const auto& prev = traj.samples[k - 1];
      cumulative += 0.5 * (s.t - prev.t) * (s.dissipation + prev.dissipation);
    }
    table.rows.push_back({s.t, s.lyapunov, s.dissipation, cumulative,
                          std::abs(s.mass - mass0) / std::abs(mass0), kNaN});
  }
  return table;
}

/// Fills the v_energy column from snapshots taken at the same times.
void add_v_energy(CsvTable& table, const Trajectory& traj, const ModelParams& p,
                  const GridDomain& grid) {
  std::size_t snap = 0;
  for (auto& row : table.rows) {
    while (snap < traj.snapshots.size() && traj.snapshots[snap].time < row[0]) ++snap;
    if (snap < traj.snapshots.size() && traj.snapshots[snap].time == row[0])
      row[5] = v_energy(traj.snapshots[snap].v, traj.eq.v_star, p.mu, grid);
  }
}

/// Largest per-sample increase of a series, relative to 1 + previous value.
double max_relative_increase(const std::vector<double>& values) {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < values.size(); ++k)
    worst = std::max(worst, (values[k] - values[k - 1]) / (1.0 + std::abs(values[k - 1])));
  return values.size() < 2 ? 0.0 : worst;
}

std::string csv_text(const CsvTable& t) {
  std::ostringstream out;
  write_csv(out, t);
  return out.str();
}

std::string trajectory_text(const Trajectory& t) {
  std::ostringstream out;
  write_trajectory_csv(out, t);
  return out.str();
}

ScenarioOutcome finish(const Setup& s, Gate& gate, Json measured, Json expected, bool pass,
                       const Trajectory* traj, const CsvTable* diagnostics) {
  ScenarioOutcome out;
  out.name = s.name;
  out.pass = pass;
  out.verdict = Json{{"scenario", s.name},
                     {"theorem", theorem_label(s.name)},
                     {"parameters", to_json(s.params)},
                     {"seed", s.seed},
                     {"hypotheses_checked", gate.json()},
                     {"measured", std::move(measured)},
                     {"expected", std::move(expected)},
                     {"pass", pass}};
  if (traj) {
    write_file(path_for(s, "_trajectory.csv"), trajectory_text(*traj));
    out.files.push_back(path_for(s, "_trajectory.csv"));
    write_snapshots(path_for(s, "_snapshots"), *traj,
                    parse_snapshot_format(s.merged.get_string("output.snapshots", "none")));
  }
  if (diagnostics) {
    write_file(path_for(s, "_diagnostics.csv"), csv_text(*diagnostics));
    out.files.push_back(path_for(s, "_diagnostics.csv"));
  }
  write_file(path_for(s, "_verdict.json"), out.verdict.dump(2) + "\n");
  out.files.push_back(path_for(s, "_verdict.json"));
  return out;
}

// ---------------------------------------------------------------------------

ScenarioOutcome persistence(Setup& s) {
  const ModelParams& p = s.params;
  Gate gate;
  gate.need(p.a > 0.0 && p.b > 0.0, "a, b > 0");
  gate.need(p.beta >= 1.0, "beta >= 1");
  gate.need(p.chi0 > 0.0, "chi0 > 0");
  if (p.m == 1.0 && p.beta >= 1.0)
    gate.need(p.chi0 < p.a / (p.mu * theta(p.beta - 1.0)), "chi0 < a/(mu*Theta_{beta-1})");
  gate.enforce(s.name);

  const FieldState init = initial_state(s, p);
  const Trajectory traj = simulate(s, p, init, false);
  const PersistenceReport r = persistence_metrics(traj, p, traj.eq);
  const CsvTable diag = diagnostics_table(traj);
  Json measured{{"tail_inf_u", r.tail_inf_u}, {"tail_inf_v", r.tail_inf_v},
                {"clip_count", traj.clip_count}};
  Json expected{{"u_bound", r.u_bound ? number_json(*r.u_bound) : Json(nullptr)},
                {"v_bound", r.v_bound ? number_json(*r.v_bound) : Json(nullptr)},
                {"generic_v_bound", r.generic_v_bound},
                {"bound_source", r.bound_source},
                {"relative_tolerance", 0.05}};
  return finish(s, gate, measured, expected, r.u_ok && r.v_ok, &traj, &diag);
}

ScenarioOutcome negative_sensitivity(Setup& s) {
  const ModelParams& p = s.params;
  Gate gate;
  gate.need(p.chi0 <= 0.0, "chi0 <= 0");
  gate.need(p.m >= 1.0, "m >= 1");
  gate.enforce(s.name);

  const FieldState init = initial_state(s, p);
  const Trajectory main = simulate(s, p, init, false);
  ModelParams minimal = p;
  minimal.a = minimal.b = 0.0;
  const Trajectory conserved = simulate(s, minimal, init_state(s.grid, minimal, ArrayInit{init.u}),
                                        false);

  const double err_main = main.samples.back().err_inf;
  const double err_min = conserved.samples.back().err_inf;
  const double rate_main = fitted_rate(main);
  const double rate_min = fitted_rate(conserved);
  const CsvTable diag = diagnostics_table(main);
  Json measured{{"final_err_inf", err_main},
                {"fitted_rate", number_json(rate_main)},
                {"minimal_final_err_inf", err_min},
                {"minimal_fitted_rate", number_json(rate_min)},
                {"minimal_u_star", conserved.eq.u_star}};
  Json expected{{"final_err_inf_max", 1e-6}, {"fitted_rate_min", 0.0}};
  const bool pass = err_main <= 1e-6 && err_min <= 1e-6 && rate_main > 0.0 && rate_min > 0.0;
  return finish(s, gate, measured, expected, pass, &main, &diag);
}

ScenarioOutcome dichotomy(Setup& s, bool stable_side) {
  const FieldState probe = initial_state(s, s.params);
  const Equilibrium eq = equilibrium_for(s.params, probe);
  const SpectrumTable spec = neumann_eigenvalues(s.grid, 1000);
  const double chi_star = critical_sensitivity(s.params, eq, spec).chi_star;
  resolve_chi0(s, chi_star);
  const ModelParams& p = s.params;
  const StabilityReport rep = classify_equilibrium(p, eq, spec);

  Gate gate;
  if (stable_side)
    gate.need(p.chi0 < chi_star, "chi0 < chi*");
  else
    gate.need(p.chi0 > chi_star, "chi0 > chi*");
  gate.enforce(s.name);

  const FieldState init = initial_state(s, p);
  Json measured;
  Json expected{{"chi_star", chi_star}, {"regime", std::string(to_string(rep.regime))}};
  bool pass = false;
  if (stable_side) {
    const Trajectory traj = simulate(s, p, init, false);
    const double rate = fitted_rate(traj);
    measured = Json{{"fitted_rate", number_json(rate)},
                    {"final_err_inf", traj.samples.back().err_inf}};
    expected["predicted_rate"] = rep.predicted_rate;
    expected["relative_tolerance"] = 0.2;
    pass = std::isfinite(rate) && std::abs(rate - rep.predicted_rate) <= 0.2 * rep.predicted_rate;
    const CsvTable diag = diagnostics_table(traj);
    return finish(s, gate, measured, expected, pass, &traj, &diag);
  }

  const double err0 = summarize(init, p, s.grid, eq).err_inf;
  try {
    const Trajectory traj = simulate(s, p, init, false);
    double peak = 0.0;
    for (const auto& smp : traj.samples) peak = std::max(peak, smp.err_inf);
    measured = Json{{"initial_err_inf", err0}, {"peak_err_inf", peak}, {"growth", peak / err0}};
    expected["growth_min"] = 10.0;
    expected["unstable_growth_rate"] = -rep.predicted_rate;
    pass = peak / err0 >= 10.0;
    const CsvTable diag = diagnostics_table(traj);
    return finish(s, gate, measured, expected, pass, &traj, &diag);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::BlowupDetected) throw;
    measured = Json{{"initial_err_inf", err0}, {"growth", "inf"}, {"note", e.what()}};
    expected["growth_min"] = 10.0;
    return finish(s, gate, measured, expected, true, nullptr, nullptr);
  }
}

ScenarioOutcome lyapunov(Setup& s, bool first) {
  const Equilibrium eq = equilibrium(s.params);
  const auto entries0 = double_star_for(s, s.params, eq, std::nullopt);
  const double threshold = entries0[first ? 0 : 1].value;
  resolve_chi0(s, threshold);
  const ModelParams& p = s.params;

  Gate gate;
  gate.need(p.a > 0.0 && p.b > 0.0, "a, b > 0");
  gate.need(p.m >= 1.0, "m >= 1");
  if (!first) gate.need(p.beta >= 1.0, "beta >= 1");
  gate.need(p.alpha + 1.0 >= 2.0 * p.gamma, "alpha + 1 >= 2*gamma");
  gate.need(p.chi0 > 0.0, "chi0 > 0");
  gate.need(p.chi0 < threshold, first ? "chi0 < chi**,1" : "chi0 < chi**,2");
  gate.enforce(s.name);

  const FieldState init = initial_state(s, p);
  const Trajectory traj = simulate(s, p, init, false);
  const CsvTable diag = diagnostics_table(traj);
  Json expected{{"threshold", threshold}};
  Json measured;
  bool pass;
  if (first) {
    std::vector<double> f;
    for (const auto& smp : traj.samples) f.push_back(smp.lyapunov);
    const double increase = max_relative_increase(f);
    const double cumulative = diag.rows.back()[3];
    const double budget =
        traj.samples.front().lyapunov / (p.b * (1.0 - p.chi0 * p.chi0 / (threshold * threshold)));
    measured = Json{{"max_relative_F_increase", increase},
                    {"cumulative_dissipation", cumulative},
                    {"final_err_inf", traj.samples.back().err_inf}};
    expected["F_increase_max"] = 1e-8;
    expected["dissipation_budget"] = budget;
    expected["budget_slack"] = 0.1;
    pass = increase <= 1e-8 && cumulative <= 1.1 * budget;
  } else {
    const double rate = fitted_rate(traj);
    measured = Json{{"final_err_inf", traj.samples.back().err_inf},
                    {"fitted_rate", number_json(rate)}};
    expected["final_err_inf_max"] = 1e-6;
    expected["fitted_rate_min"] = 0.0;
    pass = traj.samples.back().err_inf <= 1e-6 && rate > 0.0;
  }
  return finish(s, gate, measured, expected, pass, &traj, &diag);
}

CsvTable envelope_table(const std::vector<RectangleState>& env, std::size_t max_rows) {
  CsvTable t;
  t.header = {"tau", "ubar", "ulow", "logdiff"};
  const std::size_t stride = std::max<std::size_t>(1, env.size() / max_rows);
  for (std::size_t k = 0; k < env.size(); ++k)
    if (k % stride == 0 || k + 1 == env.size())
      t.rows.push_back({env[k].t, env[k].ubar, env[k].ulow,
                        std::log(env[k].ubar) - std::log(env[k].ulow)});
  return t;
}

double max_logdiff_increase(const std::vector<RectangleState>& env) {
  double worst = 0.0;
  for (std::size_t k = 1; k < env.size(); ++k) {
    const double prev = std::log(env[k - 1].ubar) - std::log(env[k - 1].ulow);
    const double cur = std::log(env[k].ubar) - std::log(env[k].ulow);
    worst = std::max(worst, cur - prev);
  }
  return worst;
}

ScenarioOutcome rectangle(Setup& s, bool third) {
  const Equilibrium eq = equilibrium(s.params);
  const auto m0 = m0_for(s, s.params);
  const auto entries0 = double_star_for(s, s.params, eq, m0);
  const double threshold = entries0[third ? 2 : 3].value;
  resolve_chi0(s, threshold);
  const ModelParams& p = s.params;

  Gate gate;
  gate.need(p.a > 0.0 && p.b > 0.0, "a, b > 0");
  gate.need(p.m >= 1.0, "m >= 1");
  gate.need(p.gamma >= 1.0, "gamma >= 1");
  if (third) {
    const double sg = p.beta > 0.0 ? 1.0 : 0.0;
    gate.need(p.alpha + 1.0 >= p.m + p.gamma + sg * p.gamma,
              "alpha + 1 >= m + gamma + sign(beta)*gamma");
    gate.need(p.chi0 < threshold, "chi0 < chi**,3");
  } else {
    gate.need(p.beta >= 1.0, "beta >= 1");
    gate.need(p.alpha + 1.0 >= p.m + 2.0 * p.gamma, "alpha + 1 >= m + 2*gamma");
    gate.need(p.chi0 < threshold, "chi0 < chi**,4");
  }
  gate.enforce(s.name);

  const FieldState init = initial_state(s, p);
  const Trajectory traj = simulate(s, p, init, false);
  const Normalization norm = normalize(p, eq, m0);
  const double h = s.grid.min_spacing();
  const double slack = s.merged.get_double("rectangle.slack", 5.0 * h * h + 1e-8);
  const double dt = s.merged.get_double("rectangle.dt", 1e-3);

  double t_offset = 0.0;
  RectangleParams rp = norm.rp;
  RectangleState start{0.0, 1.0, 1.0};
  Json measured;
  Json expected{{"threshold", threshold},
                {"slack", slack},
                {"envelope_distance_max", 1e-6},
                {"logdiff_increase_max", 1e-10}};
  if (m0) {
    expected["m0"] = m0->value;
    expected["m0_provenance"] = std::string(to_string(m0->provenance));
  }
  if (third) {
    start = envelope_start(init.u, eq.u_star);
  } else {
    const double v_lb = underbar_v(p);
    std::optional<std::size_t> entry;
    for (std::size_t k = 0; k < traj.samples.size(); ++k)
      if (traj.samples[k].v_min >= v_lb) {
        entry = k;
        break;
      }
    expected["signal_floor"] = v_lb;
    if (!entry) {
      measured = Json{{"signal_floor_reached", false}};
      const CsvTable diag = diagnostics_table(traj);
      return finish(s, gate, measured, expected, false, &traj, &diag);
    }
    const auto& smp = traj.samples[*entry];
    t_offset = smp.t;
    start = RectangleState{0.0, std::max(1.0, smp.u_max / eq.u_star),
                           std::min(1.0, smp.u_min / eq.u_star)};
    rp = reduce_for_signal_floor(norm.rp, p.beta, eq.v_star, m0 ? m0->value : 0.0, v_lb);
    measured["signal_floor_time"] = t_offset;
  }

  const double tau_end = s.merged.get_double(
      "rectangle.t_end", norm.time_scale * (traj.samples.back().t - t_offset));
  const auto env = integrate_rectangle(start, rp, tau_end, dt);
  const SandwichReport sw = verify_sandwich(traj, env, eq.u_star, norm.time_scale, slack, t_offset);
  const double dist = std::max(std::abs(env.back().ubar - 1.0), std::abs(env.back().ulow - 1.0));
  const double logdiff_inc = max_logdiff_increase(env);

  measured["kappa0"] = rp.kappa0;
  measured["quad_coef"] = rp.quad_coef;
  measured["contraction_hypothesis"] = rp.contraction;
  measured["sandwich_samples"] = sw.samples;
  measured["sandwich_violations"] = sw.violations;
  measured["worst_lower_excess"] = sw.worst_lower_excess;
  measured["worst_upper_excess"] = sw.worst_upper_excess;
  measured["envelope_final_distance"] = dist;
  measured["max_logdiff_increase"] = logdiff_inc;
  if (sw.first_violation) measured["first_violation_t"] = sw.first_violation_t;
  const bool pass = sw.ok() && dist <= 1e-6 && logdiff_inc <= 1e-10;

  write_file(path_for(s, "_envelope.csv"), csv_text(envelope_table(env, 5000)));
  const CsvTable diag = diagnostics_table(traj);
  auto out = finish(s, gate, measured, expected, pass, &traj, &diag);
  out.files.push_back(path_for(s, "_envelope.csv"));
  return out;
}

ScenarioOutcome minimal(Setup& s, bool entropy) {
  ModelParams p0 = s.params;
  const FieldState init0 = initial_state(s, p0);
  const Equilibrium eq = equilibrium_for(p0, init0);
  const SpectrumTable spec = neumann_eigenvalues(s.grid, 2);
  const int dim = s.grid.dimension();

  Gate gate;
  gate.need(p0.is_minimal(), "a = b = 0");
  gate.need(p0.m == 1.0, "m = 1");
  gate.need(p0.beta >= 1.0, "beta >= 1");
  if (!entropy) gate.need(p0.gamma == 1.0, "gamma = 1");
  gate.enforce(s.name);

  // ū0, v̱0: supplied, or measured on a calibration run at the largest sensitivity
  // covered by the eventual-bound statement (0.9 · min{χ_β/2, √χ_β}).
  double ubar0, vlower0;
  Provenance prov;
  const double chi_beta = chi_beta_threshold(p0.beta, p0.gamma, dim);
  if (s.merged.has("minimal.ubar0") && s.merged.has("minimal.vlower0")) {
    ubar0 = s.merged.get_double("minimal.ubar0", 0.0);
    vlower0 = s.merged.get_double("minimal.vlower0", 0.0);
    prov = Provenance::UserSupplied;
  } else {
    ModelParams cal = p0;
    cal.chi0 = 0.9 * std::min(chi_beta / 2.0, std::sqrt(chi_beta));
    StepConfig cfg = s.step;
    const double t_cal = s.merged.get_double("minimal.calibration_time", 20.0);
    cfg.t_end = t_cal;
    const Trajectory c = run(cal, s.grid, init0, cfg);
    ubar0 = 0.0;
    vlower0 = std::numeric_limits<double>::infinity();
    for (const auto& smp : c.samples)
      if (smp.t >= 0.5 * t_cal) {
        ubar0 = std::max(ubar0, smp.u_max);
        vlower0 = std::min(vlower0, smp.v_min);
      }
    prov = Provenance::Empirical;
  }
  const MinimalThresholds mt = minimal_thresholds(eq.u_star, p0.gamma, p0.beta, p0.mu, p0.nu, dim,
                                                  spec.lambda_star(), ubar0, vlower0, prov);
  const double threshold = entropy ? mt.chi_ss1 : *mt.chi_ss2;
  resolve_chi0(s, threshold);
  const ModelParams& p = s.params;
  gate.need(p.chi0 > 0.0, "chi0 > 0");
  gate.need(p.chi0 < threshold, entropy ? "chi0 < chi_beta**,1" : "chi0 < chi_beta**,2");
  gate.enforce(s.name);

  const FieldState init = initial_state(s, p);
  const Trajectory traj = simulate(s, p, init, !entropy);
  CsvTable diag = diagnostics_table(traj);
  if (!entropy) add_v_energy(diag, traj, p, s.grid);

  double drift = 0.0;
  for (const auto& row : diag.rows) drift = std::max(drift, row[4]);
  const double rate = fitted_rate(traj);
  Json measured{{"max_rel_mass_drift", drift},
                {"clip_count", traj.clip_count},
                {"final_err_inf", traj.samples.back().err_inf},
                {"fitted_rate", number_json(rate)},
                {"u_star", traj.eq.u_star}};
  Json expected{{"threshold", threshold},
                {"ubar0", ubar0},
                {"vlower0", vlower0},
                {"inputs", std::string(to_string(prov))},
                {"mass_drift_max", 1e-8},
                {"monotone_tolerance", 1e-8},
                {"fitted_rate_min", 0.0}};
  std::vector<double> series;
  for (const auto& row : diag.rows) series.push_back(entropy ? row[1] : row[5]);
  const double increase = max_relative_increase(series);
  measured[entropy ? "max_relative_entropy_increase" : "max_relative_v_energy_increase"] = increase;
  const bool pass = drift <= 1e-8 && increase <= 1e-8 && rate > 0.0;
  return finish(s, gate, measured, expected, pass, &traj, &diag);
}

ScenarioOutcome thresholds_only(Setup& s) {
  const ModelParams& p = s.params;
  const Equilibrium eq = p.is_minimal() ? equilibrium(p, s.merged.get_double("u_star", 1.0))
                                        : equilibrium(p);
  const ThresholdInputs in = threshold_inputs_from(s.merged, p, s.grid, s.seed);
  const ThresholdReport rep = compute_thresholds(p, eq, s.grid, in);
  const StabilityReport stab = classify_equilibrium(p, eq, neumann_eigenvalues(s.grid, 1000));

  Gate gate;
  gate.need(true, "parameters valid");
  bool pass = true;
  if (rep.chi_ss)
    for (const auto& e : *rep.chi_ss)
      if (e.applicable && e.value > rep.chi_star * (1.0 + 1e-12)) pass = false;
  if (rep.minimal) {
    if (rep.minimal->chi_ss1 > rep.chi_star * (1.0 + 1e-12)) pass = false;
    if (rep.minimal->chi_ss2 && *rep.minimal->chi_ss2 > rep.chi_star * (1.0 + 1e-12)) pass = false;
  }
  Json measured{{"thresholds", to_json(rep)}, {"stability", to_json(stab)}};
  Json expected{{"ordering", "every applicable explicit threshold <= chi*"}};
  CsvTable diag;
  diag.header = {"n", "lambda", "sigma"};
  for (const auto& e : stab.sigma_table)
    if (e.n <= 50) diag.rows.push_back({static_cast<double>(e.n), e.lambda, e.sigma});
  return finish(s, gate, measured, expected, pass, nullptr, &diag);
}

ScenarioOutcome sweep(Setup& s) {
  const CsvTable table = sweep_table(s.merged, s.seed);
  write_file(path_for(s, "_sweep.csv"), csv_text(table));
  std::size_t violations = 0;
  const auto col = [&](const std::string& name) {
    return static_cast<std::size_t>(
        std::find(table.header.begin(), table.header.end(), name) - table.header.begin());
  };
  const std::size_t chi_star = col("chi_star");
  for (const auto& row : table.rows)
    for (int i = 1; i <= 4; ++i) {
      const std::size_t v = col(fmt::format("chi_ss{}", i));
      const std::size_t a = col(fmt::format("chi_ss{}_applicable", i));
      if (row[a] == 1.0 && row[v] > row[chi_star] * (1.0 + 1e-12)) ++violations;
    }
  Gate gate;
  gate.need(true, "parameters valid");
  Json measured{{"rows", table.rows.size()}, {"ordering_violations", violations}};
  Json expected{{"ordering_violations", 0}};
  auto out = finish(s, gate, measured, expected, violations == 0, nullptr, &table);
  out.files.push_back(path_for(s, "_sweep.csv"));
  return out;
}

// Sweep axes ---------------------------------------------------------------

std::vector<double> axis_values(const Config& cfg, const std::string& key) {
  const std::string text = cfg.get_string(key, "");
  if (text.find(':') == std::string::npos) return cfg.get_list(key);
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) {
    Config one;
    one.set("chi0", item);
    parts.push_back(one.get_double("chi0", 0.0));
  }
  if (parts.size() != 3 || parts[2] < 1 || parts[2] != std::floor(parts[2]))
    throw Error(ErrorKind::ConfigError, key + " must be lo:hi:count");
  const auto n = static_cast<int>(parts[2]);
  std::vector<double> out;
  for (int k = 0; k < n; ++k)
    out.push_back(n == 1 ? parts[0] : parts[0] + (parts[1] - parts[0]) * k / (n - 1));
  return out;
}

void assign(ModelParams& p, double& length, const std::string& axis, double value) {
  static const std::map<std::string, double ModelParams::*> fields = {
      {"chi0", &ModelParams::chi0}, {"beta", &ModelParams::beta}, {"m", &ModelParams::m},
      {"alpha", &ModelParams::alpha}, {"gamma", &ModelParams::gamma}, {"a", &ModelParams::a},
      {"b", &ModelParams::b},       {"mu", &ModelParams::mu},     {"nu", &ModelParams::nu}};
  if (axis == "length") {
    length = value;
    return;
  }
  const auto it = fields.find(axis);
  if (it == fields.end()) throw Error(ErrorKind::ConfigError, "cannot sweep over '" + axis + "'");
  p.*(it->second) = value;
}

}  // namespace

ThresholdInputs threshold_inputs_from(const Config& cfg, const ModelParams& p,
                                      const GridDomain& grid, std::uint64_t seed) {
  ThresholdInputs in;
  const std::string table = cfg.get_string("thresholds.c_star_table", "");
  in.cz = table.empty() ? cz_constant_stub() : load_cz_constant_table(table);
  if (const auto v = cfg.find_double("thresholds.m0")) {
    in.m0 = M0Value{*v, Provenance::UserSupplied};
  } else if (p.beta > 0.0 && !p.is_minimal()) {
    std::mt19937_64 rng(seed);
    const auto samples = static_cast<std::size_t>(cfg.get_int("thresholds.m0_samples", 200));
    in.m0 = M0Value{estimate_m0(grid, p.mu, p.nu, samples, rng), Provenance::Empirical};
  }
  in.ubar0 = cfg.find_double("minimal.ubar0");
  in.vlower0 = cfg.find_double("minimal.vlower0");
  return in;
}

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names = {
      "persistence",   "negative-sensitivity", "stable-dichotomy", "unstable-dichotomy",
      "lyapunov-i",    "lyapunov-ii",          "rectangle-iii",    "rectangle-iv",
      "minimal-entropy", "minimal-akl",        "thresholds-only",  "sweep"};
  return names;
}

Config scenario_preset(const std::string& name) {
  const auto it = preset_text().find(name);
  if (it == preset_text().end())
    throw Error(ErrorKind::ConfigError, "unknown scenario '" + name + "'");
  return Config::parse(it->second, "preset " + name);
}

ScenarioOutcome run_scenario(const std::string& name, const Config& user, std::uint64_t seed) {
  Setup s = make_setup(name, user, seed);
  if (name == "persistence") return persistence(s);
  if (name == "negative-sensitivity") return negative_sensitivity(s);
  if (name == "stable-dichotomy") return dichotomy(s, true);
  if (name == "unstable-dichotomy") return dichotomy(s, false);
  if (name == "lyapunov-i") return lyapunov(s, true);
  if (name == "lyapunov-ii") return lyapunov(s, false);
  if (name == "rectangle-iii") return rectangle(s, true);
  if (name == "rectangle-iv") return rectangle(s, false);
  if (name == "minimal-entropy") return minimal(s, true);
  if (name == "minimal-akl") return minimal(s, false);
  if (name == "thresholds-only") return thresholds_only(s);
  return sweep(s);
}

CsvTable sweep_table(const Config& cfg, std::uint64_t seed) {
  std::vector<std::string> axes;
  std::vector<std::vector<double>> values;
  for (const auto& key : cfg.keys_with_prefix("sweep.")) {
    if (key == "sweep.max_rows") continue;
    axes.push_back(key.substr(6));
    values.push_back(axis_values(cfg, key));
    if (values.back().empty()) throw Error(ErrorKind::ConfigError, key + " is empty");
  }
  std::size_t total = 1;
  const auto cap = static_cast<std::size_t>(cfg.get_int("sweep.max_rows", 10000));
  for (const auto& v : values) {
    total *= v.size();
    if (total > cap)
      throw Error(ErrorKind::GridTooLarge,
                  fmt::format("sweep has more than {} rows (sweep.max_rows)", cap));
  }

  CsvTable table;
  table.header = axes;
  for (const char* c : {"u_star", "v_star", "chi_star", "argmin_mode", "regime", "predicted_rate",
                        "chi_beta", "chi_ab_beta", "chi_ss1", "chi_ss2", "chi_ss3", "chi_ss4",
                        "chi_ss1_applicable", "chi_ss2_applicable", "chi_ss3_applicable",
                        "chi_ss4_applicable", "m0", "chi_ss1_min", "chi_ss2_min"})
    table.header.emplace_back(c);
  table.rows.assign(total, {});

  const ModelParams base = params_from(cfg);
  const GridDomain base_grid = grid_from(cfg);
  const double u_star_minimal = cfg.get_double("u_star", 1.0);
  // M0 depends only on the grid and (μ, ν), so it is drawn from the global seed
  // on every row; rows sharing a grid then share M0 and trends stay clean.
  auto inputs_for = [&](const ModelParams& p, const GridDomain& grid) {
    return threshold_inputs_from(cfg, p, grid, seed);
  };
  std::vector<std::string> errors(total);

#pragma omp parallel for schedule(dynamic) if (total > 1)
  for (std::size_t row = 0; row < total; ++row) {
    try {
      ModelParams p = base;
      double length = base_grid.length(0);
      std::vector<double> out;
      std::size_t rest = row;
      for (std::size_t k = axes.size(); k-- > 0;) {
        const double v = values[k][rest % values[k].size()];
        rest /= values[k].size();
        out.insert(out.begin(), v);
        assign(p, length, axes[k], v);
      }
      p = validate_params(p);
      const GridDomain grid =
          base_grid.dimension() == 1
              ? GridDomain::interval(length, base_grid.cells(0))
              : GridDomain::rectangle(length, base_grid.length(1), base_grid.cells(0),
                                      base_grid.cells(1));
      const Equilibrium eq =
          p.is_minimal() ? equilibrium(p, u_star_minimal) : equilibrium(p);
      const SpectrumTable spec = neumann_eigenvalues(grid, 1000);
      const StabilityReport stab = classify_equilibrium(p, eq, spec);

      const ThresholdReport rep = compute_thresholds(p, eq, grid, inputs_for(p, grid));
      out.insert(out.end(), {eq.u_star, eq.v_star, stab.chi_star,
                             static_cast<double>(stab.argmin_mode),
                             static_cast<double>(static_cast<int>(stab.regime)),
                             stab.predicted_rate, rep.chi_beta.value_or(kNaN),
                             rep.chi_ab_beta ? rep.chi_ab_beta->value : kNaN});
      for (std::size_t i = 0; i < 4; ++i) out.push_back(rep.chi_ss ? (*rep.chi_ss)[i].value : kNaN);
      for (std::size_t i = 0; i < 4; ++i)
        out.push_back(rep.chi_ss && (*rep.chi_ss)[i].applicable ? 1.0 : 0.0);
      out.push_back(rep.aux && rep.aux->m0 ? rep.aux->m0->value : kNaN);
      out.push_back(rep.minimal ? rep.minimal->chi_ss1 : kNaN);
      out.push_back(rep.minimal && rep.minimal->chi_ss2 ? *rep.minimal->chi_ss2 : kNaN);
      table.rows[row] = std::move(out);
    } catch (const std::exception& e) {
      errors[row] = e.what();
    }
  }
  for (std::size_t row = 0; row < total; ++row)
    if (!errors[row].empty())
      throw Error(ErrorKind::ConfigError, fmt::format("sweep row {}: {}", row, errors[row]));
  return table;
}

}  // namespace chemostab
