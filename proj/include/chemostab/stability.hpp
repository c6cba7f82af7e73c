#pragma once

#include <string_view>
#include <vector>

#include "chemostab/model.hpp"

namespace chemostab {

enum class Regime { LinearlyStable, Unstable, Critical };

std::string_view to_string(Regime r);

struct SigmaEntry {
  int n;
  double lambda;
  double sigma;
};

struct StabilityReport {
  std::vector<SigmaEntry> sigma_table;
  double chi_star;
  int argmin_mode;
  Regime regime;
  // min over modes of −σ_n (σ_0 = 0 of the minimal model excluded); negative when unstable.
  double predicted_rate;
};

/// Growth rate of the Neumann mode with eigenvalue λ about (u*, v*).
double sigma_n(const ModelParams& params, const Equilibrium& eq, double lambda);

/// Coefficient νγ(u*)^{m+γ−1}/(1+v*)^β multiplying χ0 λ/(μ+λ) in σ_n.
double sensitivity_gain(const ModelParams& params, const Equilibrium& eq);

/// (1+v*)^β (√(aα) + √μ)² / (νγ (u*)^{m+γ−1}), a floor for χ*.
double chi_star_lower_bound(const ModelParams& params, const Equilibrium& eq);

struct CriticalSensitivity {
  double chi_star;
  int argmin_mode;
};

/// Infimum over n ≥ 1 of the mode-wise neutral sensitivity. The table must reach
/// past λ = √(aαμ), beyond which the bracket is increasing in λ.
CriticalSensitivity critical_sensitivity(const ModelParams& params, const Equilibrium& eq,
                                         const SpectrumTable& spectrum);

StabilityReport classify_equilibrium(const ModelParams& params, const Equilibrium& eq,
                                     const SpectrumTable& spectrum);

struct DiscreteSpectrumCheck {
  std::vector<double> analytic;    // σ_n, n = 0..n_modes
  std::vector<double> discrete;    // matched eigenvalue of the assembled operator
  std::vector<double> deviation;   // relative (absolute where |σ_n| < 1e-12)
  double max_deviation;            // over n = 1..n_modes
};

/// Assembles the linearized operator on the grid, computes its eigenpairs, and
/// compares the eigenvalue attached to each Neumann mode with σ_n.
DiscreteSpectrumCheck discrete_spectrum_check(const ModelParams& params, const Equilibrium& eq,
                                              const GridDomain& grid, int n_modes);

}  // namespace chemostab
