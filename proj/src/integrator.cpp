#include "chemostab/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "chemostab/diagnostics.hpp"
#include "chemostab/error.hpp"

namespace chemostab {

namespace {

kernels::SensitivityCoeffs sensitivity_of(const ModelParams& p) { return {p.chi0, p.beta, p.m}; }

kernels::ReactionCoeffs reaction_of(const ModelParams& p) { return {p.a, p.b, p.alpha}; }

void require_fields(const FieldState& state, const GridDomain& grid) {
  if (state.u.size() != grid.size() || state.v.size() != grid.size())
    throw Error(ErrorKind::NonFiniteInput, "state does not match the grid");
}

// Unscaled bounds: explicit advection needs dt · outflow ≤ 1, the source term
// dt · d/du (au − bu^{1+α}) ≤ 1.
struct StepBounds {
  double advection;
  double reaction;
};

StepBounds step_bounds(const FieldState& state, const ModelParams& params, const GridDomain& grid,
                       kernels::Exec exec) {
  const auto shape = kernels::GridShape::of(grid);
  const double outflow =
      kernels::max_outflow_rate(exec, shape, sensitivity_of(params), state.u, state.v);
  const double u_max = *std::max_element(state.u.begin(), state.u.end());
  const double growth = params.a + params.b * (1.0 + params.alpha) * std::pow(u_max, params.alpha);
  if (!std::isfinite(outflow) || !std::isfinite(growth))
    throw Error(ErrorKind::DegenerateState, "non-finite rate in time-step selection");
  const double inf = std::numeric_limits<double>::infinity();
  return {outflow > 0.0 ? 1.0 / outflow : inf, growth > 0.0 ? 1.0 / growth : inf};
}

}  // namespace

void validate_step_config(const StepConfig& cfg) {
  auto fail = [](const std::string& msg) { throw Error(ErrorKind::ConfigError, msg); };
  if (!(cfg.t_end > 0.0) || !std::isfinite(cfg.t_end)) fail("t_end must be positive");
  if (cfg.policy == DtPolicy::Fixed && !(cfg.dt > 0.0)) fail("dt must be positive");
  if (!(cfg.cfl > 0.0 && cfg.cfl <= 1.0)) fail("cfl must lie in (0, 1]");
  if (!(cfg.dt_max > 0.0)) fail("dt_max must be positive");
  if (cfg.output_stride < 1) fail("output_stride must be at least 1");
  if (cfg.snapshot_stride < 0) fail("snapshot_stride must be non-negative");
  if (!(cfg.blowup_cap > 0.0)) fail("blowup_cap must be positive");
  if (!(cfg.positivity_floor >= 0.0)) fail("positivity_floor must be non-negative");
}

kernels::FaceFlux chemotactic_face_flux(std::span<const double> u, std::span<const double> v,
                                        const ModelParams& params, const GridDomain& grid,
                                        kernels::Exec exec) {
  kernels::FaceFlux flux;
  kernels::face_flux(exec, kernels::GridShape::of(grid), sensitivity_of(params), u, v, flux);
  return flux;
}

double stable_dt(const FieldState& state, const ModelParams& params, const GridDomain& grid,
                 const StepConfig& cfg) {
  require_fields(state, grid);
  const auto bounds = step_bounds(state, params, grid, cfg.exec);
  return std::min({cfg.dt_max, cfg.cfl * bounds.advection, cfg.cfl * bounds.reaction});
}

Integrator::Integrator(const ModelParams& params, const GridDomain& grid, kernels::Exec exec,
                       double blowup_cap, double positivity_floor)
    : params_(validate_params(params)),
      grid_(grid),
      shape_(kernels::GridShape::of(grid)),
      exec_(exec),
      blowup_cap_(blowup_cap),
      floor_(positivity_floor),
      helmholtz_(grid, params.mu, exec),
      div_(grid.size()),
      work_(grid.size()) {}

const ScreenedLaplacian& Integrator::diffusion_solver(double dt) {
  if (!implicit_ || implicit_dt_ != dt) {
    implicit_ = std::make_unique<ScreenedLaplacian>(grid_, 1.0 / dt, exec_);
    implicit_dt_ = dt;
  }
  return *implicit_;
}

FieldState Integrator::step(const FieldState& state, double dt) {
  require_fields(state, grid_);
  if (!(dt > 0.0) || !std::isfinite(dt))
    throw Error(ErrorKind::UnstableTimeStep, "time step must be positive and finite");

  kernels::face_flux(exec_, shape_, sensitivity_of(params_), state.u, state.v, flux_);
  kernels::flux_divergence(exec_, shape_, flux_, div_);
  kernels::explicit_update(exec_, reaction_of(params_), dt, state.u, div_, work_);

  // (I − dt Δ_h) u_new = u_exp, written as (I/dt − Δ_h) u_new = u_exp / dt.
  const double inv_dt = 1.0 / dt;
  for (double& w : work_) w *= inv_dt;
  FieldState next;
  next.time = state.time + dt;
  next.u = diffusion_solver(dt).solve(work_);

  for (double& x : next.u) {
    if (!std::isfinite(x) || x > blowup_cap_)
      throw Error(ErrorKind::BlowupDetected,
                  "density exceeded " + std::to_string(blowup_cap_) + " at t = " +
                      std::to_string(next.time));
    if (x < floor_) {
      x = floor_;
      ++clip_count_;
    }
  }
  next.v = chemical_field(helmholtz_, params_, next.u);
  return next;
}

FieldState step(const FieldState& state, const ModelParams& params, const GridDomain& grid,
                double dt) {
  Integrator integrator(params, grid);
  return integrator.step(state, dt);
}

SummarySample summarize(const FieldState& state, const ModelParams& params,
                        const GridDomain& grid, const Equilibrium& eq) {
  require_fields(state, grid);
  const auto [u_lo, u_hi] = std::minmax_element(state.u.begin(), state.u.end());
  const auto [v_lo, v_hi] = std::minmax_element(state.v.begin(), state.v.end());
  double err = 0.0;
  for (double x : state.u) err = std::max(err, std::abs(x - eq.u_star));

  SummarySample s;
  s.t = state.time;
  s.u_min = *u_lo;
  s.u_max = *u_hi;
  s.v_min = *v_lo;
  s.v_max = *v_hi;
  s.mass = kernels::sum(kernels::Exec::Serial, state.u) * grid.cell_volume();
  s.err_inf = err;
  s.lyapunov = *u_lo > 0.0 ? lyapunov_F(state.u, eq.u_star, params.m, grid)
                           : std::numeric_limits<double>::infinity();
  s.dissipation = dissipation_D(state.u, eq.u_star, params.alpha, grid);
  return s;
}

Trajectory run(const ModelParams& params, const GridDomain& grid, const FieldState& init,
               const StepConfig& cfg, std::optional<double> u_star) {
  validate_step_config(cfg);
  const ModelParams p = validate_params(params);
  require_fields(init, grid);

  Trajectory traj;
  if (p.is_minimal() && !u_star)
    u_star = kernels::sum(kernels::Exec::Serial, init.u) / static_cast<double>(init.u.size());
  traj.eq = equilibrium(p, p.is_minimal() ? u_star : std::nullopt);

  Integrator integrator(p, grid, cfg.exec, cfg.blowup_cap, cfg.positivity_floor);
  FieldState state = init;
  const double t0 = state.time;
  const double t_end = t0 + cfg.t_end;
  traj.samples.push_back(summarize(state, p, grid, traj.eq));
  if (cfg.snapshot_stride > 0) traj.snapshots.push_back(state);

  bool recorded = true;
  while (t_end - state.time > 1e-12 * std::max(1.0, std::abs(t_end))) {
    double dt;
    if (cfg.policy == DtPolicy::Fixed) {
      const auto bounds = step_bounds(state, p, grid, cfg.exec);
      dt = cfg.dt;
      if (dt > std::min(bounds.advection, bounds.reaction))
        throw Error(ErrorKind::UnstableTimeStep,
                    "fixed dt " + std::to_string(dt) + " exceeds the positivity bound " +
                        std::to_string(std::min(bounds.advection, bounds.reaction)) +
                        " at t = " + std::to_string(state.time));
    } else {
      dt = stable_dt(state, p, grid, cfg);
    }
    const bool last = state.time + dt >= t_end;
    if (last) dt = t_end - state.time;
    state = integrator.step(state, dt);
    if (last) state.time = t_end;
    ++traj.steps;

    recorded = traj.steps % static_cast<std::size_t>(cfg.output_stride) == 0;
    if (recorded) traj.samples.push_back(summarize(state, p, grid, traj.eq));
    if (cfg.snapshot_stride > 0 && traj.steps % static_cast<std::size_t>(cfg.snapshot_stride) == 0)
      traj.snapshots.push_back(state);
  }
  if (!recorded) traj.samples.push_back(summarize(state, p, grid, traj.eq));
  traj.clip_count = integrator.clip_count();
  traj.final_state = std::move(state);
  return traj;
}

}  // namespace chemostab
