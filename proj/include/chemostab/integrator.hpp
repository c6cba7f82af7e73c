#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>

#include "chemostab/helmholtz.hpp"
#include "chemostab/kernels.hpp"
#include "chemostab/model.hpp"
#include "chemostab/trajectory.hpp"

namespace chemostab {

enum class DtPolicy { Fixed, Adaptive };

struct StepConfig {
  DtPolicy policy = DtPolicy::Adaptive;
  double dt = 0.01;       // used by DtPolicy::Fixed
  double cfl = 0.5;       // σ_cfl in (0, 1]
  double dt_max = 0.05;   // cap for DtPolicy::Adaptive
  double t_end = 1.0;
  int output_stride = 1;
  double blowup_cap = 1e6;
  double positivity_floor = 0.0;
  int snapshot_stride = 0;  // 0 disables field snapshots
  kernels::Exec exec = kernels::Exec::Parallel;
};

void validate_step_config(const StepConfig& cfg);

/// Face values of χ0 u_up^m (1+v_face)^{−β} ∇_h v, upwinded by the drift sign.
kernels::FaceFlux chemotactic_face_flux(std::span<const double> u, std::span<const double> v,
                                        const ModelParams& params, const GridDomain& grid,
                                        kernels::Exec exec = kernels::Exec::Parallel);

/// Largest step keeping the explicit advection and reaction parts positivity preserving.
double stable_dt(const FieldState& state, const ModelParams& params, const GridDomain& grid,
                 const StepConfig& cfg);

/// IMEX stepper: backward-Euler diffusion, explicit upwind chemotaxis and logistic
/// source, then a fresh signal solve.
class Integrator {
 public:
  Integrator(const ModelParams& params, const GridDomain& grid,
             kernels::Exec exec = kernels::Exec::Parallel, double blowup_cap = 1e6,
             double positivity_floor = 0.0);

  FieldState step(const FieldState& state, double dt);

  std::size_t clip_count() const { return clip_count_; }
  const HelmholtzOperator& helmholtz() const { return helmholtz_; }

 private:
  const ScreenedLaplacian& diffusion_solver(double dt);

  ModelParams params_;
  GridDomain grid_;
  kernels::GridShape shape_;
  kernels::Exec exec_;
  double blowup_cap_;
  double floor_;
  HelmholtzOperator helmholtz_;
  std::unique_ptr<ScreenedLaplacian> implicit_;
  double implicit_dt_ = -1.0;
  kernels::FaceFlux flux_;
  Field div_;
  Field work_;
  std::size_t clip_count_ = 0;
};

/// One step from a fresh integrator (convenience for tests and tools).
FieldState step(const FieldState& state, const ModelParams& params, const GridDomain& grid,
                double dt);

SummarySample summarize(const FieldState& state, const ModelParams& params,
                        const GridDomain& grid, const Equilibrium& eq);

/// Integrates to cfg.t_end. The reference equilibrium is (a/b)^{1/α} for the
/// logistic model and the initial mean density for the minimal model unless
/// u_star is given.
Trajectory run(const ModelParams& params, const GridDomain& grid, const FieldState& init,
               const StepConfig& cfg, std::optional<double> u_star = std::nullopt);

}  // namespace chemostab
