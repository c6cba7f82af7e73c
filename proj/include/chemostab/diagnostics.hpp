#pragma once

#include <cstddef>
#include <optional>
#include <random>
#include <span>
#include <string>

#include "chemostab/model.hpp"
#include "chemostab/trajectory.hpp"

namespace chemostab {

/// h_m(s) = ∫_{u*}^s (1 − (u*/τ)^{2m−1}) dτ in closed form.
double lyapunov_density(double s, double u_star, double m);

/// F = Σ h_m(u_i) |cell|.
double lyapunov_F(std::span<const double> u, double u_star, double m, const GridDomain& grid);

/// ∫ (u − u* − u* ln(u/u*)), the entropy of the mass-conserving model.
double minimal_entropy(std::span<const double> u, double u_star, const GridDomain& grid);

/// D = ∫ (u − u*)(u^α − (u*)^α) ≥ 0.
double dissipation_D(std::span<const double> u, double u_star, double alpha,
                     const GridDomain& grid);

/// ∫ (μ w² + |∇_h w|²) with w = v − v*, gradients on interior faces.
double v_energy(std::span<const double> v, double v_star, double mu, const GridDomain& grid);

struct DecayFit {
  double rate;
  double prefactor;
  double r_squared;
  std::size_t points;
};

/// Least squares on (t, log value) over samples with 10·floor ≤ value ≤ 0.1·value[0].
DecayFit fit_decay_rate(std::span<const double> times, std::span<const double> values,
                        double floor = 1e-12);

struct InequalityFuzzReport {
  std::size_t trials = 0;
  std::size_t violations = 0;
  double worst_ratio = 0.0;  // max LHS / RHS seen
};

/// Samples (α, γ, u*, u) with 2γ ≤ α + 1 and checks
/// (u^γ − u*^γ)² ≤ C_{α,γ} u*^{2γ−α−1} (u − u*)(u^α − u*^α).
InequalityFuzzReport check_power_diff_inequality(std::size_t trials, std::mt19937_64& rng);

struct PersistenceReport {
  double tail_inf_u;
  double tail_inf_v;
  bool hypothesis_met;       // an explicit u-bound applies
  std::string bound_source;  // which persistence statement supplied the bound
  std::optional<double> u_bound;
  std::optional<double> v_bound;
  double generic_v_bound;    // (ν/μ)(tail inf u)^γ
  bool u_ok;
  bool v_ok;
};

/// Tail (last 25% of samples) infima against the eventual lower bounds.
PersistenceReport persistence_metrics(const Trajectory& traj, const ModelParams& params,
                                      const Equilibrium& eq, double rel_tol = 0.05);

}  // namespace chemostab
