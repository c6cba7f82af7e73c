// Acceptance checks at desk scale (1D, 256 cells). One PASS/FAIL line per
// criterion; exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include <fmt/format.h>

#include "chemostab/diagnostics.hpp"
#include "chemostab/error.hpp"
#include "chemostab/helmholtz.hpp"
#include "chemostab/integrator.hpp"
#include "chemostab/scenario.hpp"
#include "chemostab/stability.hpp"
#include "chemostab/thresholds.hpp"

using namespace chemostab;
namespace fs = std::filesystem;

namespace {

const double kPi = std::numbers::pi;

struct Verdict {
  bool pass;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* name, const std::function<Verdict()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Verdict v;
  try {
    v = body();
  } catch (const std::exception& e) {
    v = {false, std::string("threw: ") + e.what()};
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!v.pass) ++failures;
  std::printf("%s %2d %s: %s [%.2fs]\n", v.pass ? "PASS" : "FAIL", id, name, v.detail.c_str(), secs);
  std::fflush(stdout);
}

ModelParams unit_params(double chi0) {
  ModelParams p;
  p.chi0 = chi0;
  return p;
}

double fitted(const Trajectory& t) {
  std::vector<double> ts, es;
  for (const auto& s : t.samples) {
    ts.push_back(s.t);
    es.push_back(s.err_inf);
  }
  return fit_decay_rate(ts, es).rate;
}

std::string scratch(const std::string& tag) {
  const fs::path dir = fs::temp_directory_path() / ("chemostab_acceptance_" + tag);
  fs::remove_all(dir);
  return dir.string();
}

Config output_to(const std::string& dir) { return Config::parse("[output]\ndir = " + dir + "\n"); }

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Verdict spectral_dichotomy() {
  const GridDomain grid = GridDomain::interval(kPi, 256);
  const auto spec = neumann_eigenvalues(grid, 1000);

  // Oracle: scan (λ + aα)(μ + λ)/λ over λ = n², n = 1..1000, unit coefficients.
  double oracle = std::numeric_limits<double>::infinity();
  int oracle_mode = 0;
  for (int n = 1; n <= 1000; ++n) {
    const double lam = double(n) * n;
    const double value = (lam + 1) * (1 + lam) / lam;
    if (value < oracle) {
      oracle = value;
      oracle_mode = n;
    }
  }
  const ModelParams base = unit_params(0);
  const auto crit = critical_sensitivity(base, equilibrium(base), spec);
  bool ok = crit.chi_star == oracle && crit.argmin_mode == oracle_mode && oracle == 4.0;

  StepConfig cfg;
  cfg.t_end = 100;
  cfg.output_stride = 5;

  const ModelParams stable = unit_params(3.5);
  const auto rep = classify_equilibrium(stable, equilibrium(stable), spec);
  double expected = 1.0;  // min(aα, min_n −σ_n) by hand
  for (int n = 1; n <= 1000; ++n) {
    const double lam = double(n) * n;
    expected = std::min(expected, lam + 1 - 3.5 * lam / (1 + lam));
  }
  const auto t0 = std::chrono::steady_clock::now();
  const Trajectory decay = run(stable, grid, init_state(grid, stable, CosineInit{1.0, 0.01}), cfg);
  const double stable_secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const double rate = fitted(decay);
  ok = ok && std::abs(rep.predicted_rate - expected) <= 1e-12 &&
       std::abs(rate - expected) <= 0.2 * expected &&
       decay.samples.back().err_inf < decay.samples.front().err_inf && decay.clip_count == 0;

  const ModelParams unstable = unit_params(4.5);
  const FieldState init = init_state(grid, unstable, CosineInit{1.0, 0.01});
  const double e0 = summarize(init, unstable, grid, equilibrium(unstable)).err_inf;
  double peak = 0;
  std::size_t clips = 0;
  const auto t1 = std::chrono::steady_clock::now();
  try {
    const Trajectory grow = run(unstable, grid, init, cfg);
    for (const auto& s : grow.samples) peak = std::max(peak, s.err_inf);
    clips = grow.clip_count;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::BlowupDetected) throw;
    peak = std::numeric_limits<double>::infinity();
  }
  const double unstable_secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t1).count();
  ok = ok && peak >= 10 * e0 && clips == 0 && stable_secs < 60 && unstable_secs < 60;
  return {ok, fmt::format("chi*={} (mode {}, oracle {}), chi0=3.5 fitted rate {:.4f} vs predicted {:.4f}; "
                          "chi0=4.5 growth {:.1f}x",
                          crit.chi_star, crit.argmin_mode, oracle, rate, expected, peak / e0)};
}

Verdict sigma_cross_validation() {
  const ModelParams p = unit_params(3.5);
  const Equilibrium eq = equilibrium(p);
  const auto coarse = discrete_spectrum_check(p, eq, GridDomain::interval(kPi, 256), 5);
  const auto fine = discrete_spectrum_check(p, eq, GridDomain::interval(kPi, 512), 5);
  const double h = kPi / 256;
  bool ok = true;
  double worst_margin = 0, min_ratio = 1e300, max_ratio = 0;
  for (int n = 1; n <= 5; ++n) {
    const double bound = 2 * (h * n) * (h * n);
    worst_margin = std::max(worst_margin, coarse.deviation[n] / bound);
    ok = ok && coarse.deviation[n] <= bound;
    const double ratio = coarse.deviation[n] / fine.deviation[n];
    min_ratio = std::min(min_ratio, ratio);
    max_ratio = std::max(max_ratio, ratio);
  }
  ok = ok && min_ratio >= 3.5 && max_ratio <= 4.5;
  return {ok, fmt::format("n<=5 worst deviation/bound {:.3f} at 256 cells, 256->512 ratio in [{:.3f}, {:.3f}]",
                          worst_margin, min_ratio, max_ratio)};
}

Verdict negative_sensitivity() {
  const GridDomain grid = GridDomain::interval(kPi, 256);
  StepConfig cfg;
  cfg.t_end = 50;
  cfg.output_stride = 5;
  ModelParams logistic = unit_params(-1);
  ModelParams minimal = logistic;
  minimal.a = minimal.b = 0;
  const FieldState init = init_state(grid, logistic, CosineInit{1.0, 0.5});
  const Trajectory a = run(logistic, grid, init, cfg);
  const Trajectory b = run(minimal, grid, init_state(grid, minimal, ArrayInit{init.u}), cfg);
  const double ra = fitted(a), rb = fitted(b);
  const double ea = a.samples.back().err_inf, eb = b.samples.back().err_inf;
  const bool ok = a.samples.back().t == 50 && ea <= 1e-6 && eb <= 1e-6 && ra > 0 && rb > 0 &&
                  a.clip_count == 0 && b.clip_count == 0;
  return {ok, fmt::format("logistic err {:.2e} rate {:.3f}; mass-matched minimal (u*={:.6f}) err {:.2e} rate {:.3f}",
                          ea, ra, b.eq.u_star, eb, rb)};
}

Verdict mass_conservation() {
  const GridDomain grid = GridDomain::interval(kPi, 256);
  ModelParams p = unit_params(1.0);
  p.a = p.b = 0;
  p.beta = 1;
  StepConfig cfg;
  cfg.policy = DtPolicy::Fixed;
  cfg.dt = 1e-3;
  cfg.t_end = 10;
  cfg.output_stride = 100;
  const Trajectory t = run(p, grid, init_state(grid, p, CosineInit{1.0, 0.5}), cfg);
  double drift = 0;
  for (const auto& s : t.samples)
    drift = std::max(drift, std::abs(s.mass - t.samples.front().mass) / t.samples.front().mass);
  const bool ok = t.steps == 10000 && drift <= 1e-8 && t.clip_count == 0;
  return {ok, fmt::format("{} steps, max relative drift {:.2e}, clips {}", t.steps, drift, t.clip_count)};
}

Verdict lyapunov_monotonicity() {
  const std::string dir = scratch("lyapunov");
  const auto out = run_scenario("lyapunov-i", output_to(dir), 1);
  const auto& m = out.verdict["measured"];
  const auto& e = out.verdict["expected"];
  const double inc = m["max_relative_F_increase"].get<double>();
  const double cum = m["cumulative_dissipation"].get<double>();
  const double budget = e["dissipation_budget"].get<double>();
  bool gated = true;
  for (const auto& h : out.verdict["hypotheses_checked"]) gated = gated && h["holds"].get<bool>();
  const double chi0 = out.verdict["parameters"]["chi0"].get<double>();
  const double threshold = e["threshold"].get<double>();
  const bool ok = gated && chi0 > 0 && chi0 < threshold && inc <= 1e-8 && cum <= 1.1 * budget;
  fs::remove_all(dir);
  return {ok, fmt::format("chi0={:.4f} < chi**,1={:.4f}; max F increase {:.2e}; cumulative D {:.4f} <= 1.1*{:.4f}",
                          chi0, threshold, inc, cum, budget)};
}

Verdict rectangle_sandwich() {
  const std::string dir = scratch("rectangle");
  const auto out = run_scenario("rectangle-iii", output_to(dir), 1);
  const auto& m = out.verdict["measured"];
  const double h = kPi / 256;
  const bool ok = out.verdict["expected"]["slack"].get<double>() == 5 * h * h + 1e-8 &&
                  m["sandwich_violations"].get<int>() == 0 && m["sandwich_samples"].get<int>() > 0 &&
                  m["envelope_final_distance"].get<double>() <= 1e-6 &&
                  m["max_logdiff_increase"].get<double>() <= 1e-10;
  fs::remove_all(dir);
  return {ok, fmt::format("{} samples, {} violations, envelope distance {:.2e}, max logdiff increase {:.1e}",
                          m["sandwich_samples"].get<int>(), m["sandwich_violations"].get<int>(),
                          m["envelope_final_distance"].get<double>(),
                          m["max_logdiff_increase"].get<double>())};
}

Verdict persistence_bounds() {
  const std::string dir = scratch("persistence");
  const auto out = run_scenario("persistence", output_to(dir), 1);
  const auto& m = out.verdict["measured"];
  const auto& params = out.verdict["parameters"];
  // (a − χ0 μ Θ_0)/b with Θ_0 = 1, raised to 1/α.
  const double a = params["a"], b = params["b"], chi0 = params["chi0"], mu = params["mu"];
  const double bound = std::pow((a - chi0 * mu * 1.0) / b, 1.0 / params["alpha"].get<double>());
  const double inf_u = m["tail_inf_u"], inf_v = m["tail_inf_v"];
  const double nu = params["nu"], gamma = params["gamma"];
  const bool ok = bound == 1.0 && out.verdict["expected"]["u_bound"].get<double>() == bound &&
                  inf_u >= bound * 0.95 && inf_v >= nu / mu * std::pow(inf_u, gamma) * 0.95 &&
                  m["clip_count"].get<int>() == 0;
  fs::remove_all(dir);
  return {ok, fmt::format("tail inf u {:.6f} >= 0.95*{}, tail inf v {:.6f}", inf_u, bound, inf_v)};
}

Verdict power_difference() {
  std::mt19937_64 rng(20240601);
  const auto r = check_power_diff_inequality(100000, rng);
  return {r.trials == 100000 && r.violations == 0,
          fmt::format("{} samples, {} violations, worst lhs/rhs {:.12f}", r.trials, r.violations, r.worst_ratio)};
}

Verdict threshold_orderings() {
  std::mt19937_64 rng(7);
  bool ok = true;
  std::string detail;
  for (auto part : {OrderingPart::First, OrderingPart::Second, OrderingPart::Third,
                    OrderingPart::Fourth, OrderingPart::Minimal}) {
    const auto r = verify_orderings(part, 1000, rng);
    ok = ok && r.checked == 1000 && r.violations == 0;
    detail += fmt::format("{} {}/{} ", to_string(part), r.violations, r.checked);
  }
  return {ok, "violations/checked: " + detail};
}

Verdict elliptic_solver() {
  auto error_at = [](int cells) {
    const GridDomain grid = GridDomain::interval(kPi, cells);
    const HelmholtzOperator op(grid, 1.0);
    Field rhs(grid.size());
    for (int i = 0; i < cells; ++i) rhs[i] = 2 * std::cos(grid.center(0, i));
    const Field v = solve_helmholtz(op, rhs);
    double err = 0;
    for (int i = 0; i < cells; ++i) err = std::max(err, std::abs(v[i] - std::cos(grid.center(0, i))));
    return err;
  };
  const double ratio = error_at(128) / error_at(256);

  const GridDomain grid = GridDomain::interval(kPi, 256);
  const HelmholtzOperator op(grid, 1.0);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  int ordered = 0;
  for (int pair = 0; pair < 100; ++pair) {
    Field f(grid.size()), g(grid.size());
    for (std::size_t k = 0; k < f.size(); ++k) {
      f[k] = unit(rng);
      g[k] = f[k] + 0.5 * (1 + unit(rng));
    }
    const Field vf = solve_helmholtz(op, f), vg = solve_helmholtz(op, g);
    bool le = true;
    for (std::size_t k = 0; k < f.size(); ++k) le = le && vf[k] <= vg[k];
    ordered += le;
  }
  return {ratio >= 3.5 && ratio <= 4.5 && ordered == 100,
          fmt::format("128->256 error ratio {:.4f}; comparison holds on {}/100 pairs", ratio, ordered)};
}

Verdict closed_forms() {
  double worst = 0;
  for (double b : {0.25, 0.5, 1.0, 2.0, 3.0, 10.0}) {
    ModelParams p;
    p.a = p.b = b;
    const Equilibrium eq = equilibrium(p);
    const auto ss = chi_double_star(p, eq, aux_constants(p, eq, 1, 1.0, std::nullopt, std::nullopt));
    worst = std::max(worst, std::abs(ss[2].value - b / 2) / (b / 2));
    worst = std::max(worst, std::abs(ss[0].value - 4 * std::sqrt(b)) / (4 * std::sqrt(b)));
  }
  return {worst <= 1e-14, fmt::format("chi**,3 = b/2 and chi**,1 = 4 sqrt(b), worst relative error {:.1e}", worst)};
}

Verdict determinism() {
  bool same = true;
  std::size_t files = 0;
  for (const char* name : {"rectangle-iv", "minimal-entropy", "sweep"}) {
    Config cfg;
    cfg.set("init.kind", "random");
    cfg.set("init.amplitude", "0.3");
    if (std::string(name) == "sweep") cfg = Config{};
    const std::string a = scratch(std::string("det_a_") + name), b = scratch(std::string("det_b_") + name);
    Config ca = cfg, cb = cfg;
    ca.set("output.dir", a);
    cb.set("output.dir", b);
    const auto ra = run_scenario(name, ca, 42);
    const auto rb = run_scenario(name, cb, 42);
    for (std::size_t k = 0; k < ra.files.size(); ++k) {
      const std::string fa = ra.files[k], fb = rb.files[k];
      same = same && fs::path(fa).filename() == fs::path(fb).filename() && slurp(fa) == slurp(fb) &&
             !slurp(fa).empty();
      ++files;
    }
    fs::remove_all(a);
    fs::remove_all(b);
  }
  return {same, fmt::format("{} output files byte-identical across repeated runs with seed 42", files)};
}

}  // namespace

int main() {
  criterion(1, "spectral dichotomy", spectral_dichotomy);
  criterion(2, "sigma_n against the discrete linearization", sigma_cross_validation);
  criterion(3, "repulsive sensitivity convergence", negative_sensitivity);
  criterion(4, "minimal-model mass conservation", mass_conservation);
  criterion(5, "Lyapunov monotonicity and dissipation budget", lyapunov_monotonicity);
  criterion(6, "rectangle sandwich", rectangle_sandwich);
  criterion(7, "persistence lower bounds", persistence_bounds);
  criterion(8, "power-difference inequality", power_difference);
  criterion(9, "threshold orderings", threshold_orderings);
  criterion(10, "elliptic solver order and comparison", elliptic_solver);
  criterion(11, "closed-form thresholds", closed_forms);
  criterion(12, "determinism", determinism);
  std::printf("%d of 12 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
