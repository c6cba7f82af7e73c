#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "chemostab/model.hpp"
#include "chemostab/thresholds.hpp"
#include "chemostab/trajectory.hpp"

namespace chemostab {

/// Envelope (ū, u̱) in the normalized variables U = u/u*, τ = a t.
struct RectangleState {
  double t;
  double ubar;
  double ulow;
};

struct RectangleParams {
  double kappa0;     // χ0 ν (u*)^{m+γ−1} / a
  double quad_coef;  // β v* M0²
  double alpha;
  double gamma;
  double m;
  bool contraction;  // κ0 < 1/(2 + quad_coef)
  std::optional<Provenance> m0_provenance;
};

struct Normalization {
  RectangleParams rp;
  double time_scale;  // τ = time_scale · t
  double u_star;
  double v_star;
};

/// Needs a, b > 0. M0 is required whenever β v* > 0.
Normalization normalize(const ModelParams& params, const Equilibrium& eq,
                        std::optional<M0Value> m0 = std::nullopt);

/// Envelope parameters once v ≥ v_lb holds: κ0 → κ0 (1+v_lb)^{−β}, quad → β v* M0²/(1+v_lb).
RectangleParams reduce_for_signal_floor(const RectangleParams& rp, double beta, double v_star,
                                        double m0, double v_lb);

std::pair<double, double> rectangle_rhs(const RectangleState& s, const RectangleParams& rp);

/// Envelope start from an initial density: (max(1, max u/u*), min(1, min u/u*)).
RectangleState envelope_start(std::span<const double> u, double u_star);

/// Classical four-stage Runge–Kutta with fixed dt; throws OrderViolation if the
/// ordering u̱ ≤ 1 ≤ ū breaks by more than 1e-10.
std::vector<RectangleState> integrate_rectangle(const RectangleState& init,
                                                const RectangleParams& rp, double t_end,
                                                double dt = 1e-3);

struct SandwichReport {
  std::size_t samples = 0;
  std::size_t violations = 0;
  std::optional<std::size_t> first_violation;
  double first_violation_t = 0.0;
  double worst_lower_excess = 0.0;  // max of u̱ − slack − min U, positive means violation
  double worst_upper_excess = 0.0;  // max of max U − ū − slack
  bool ok() const { return violations == 0; }
};

/// Compares PDE extrema (samples with t ≥ t_offset) against the envelope,
/// interpolating the envelope linearly at τ = time_scale (t − t_offset).
SandwichReport verify_sandwich(const Trajectory& pde, const std::vector<RectangleState>& rect,
                               double u_star, double time_scale, double slack,
                               double t_offset = 0.0);

}  // namespace chemostab
