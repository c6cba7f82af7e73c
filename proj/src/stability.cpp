#include "chemostab/stability.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "chemostab/error.hpp"

namespace chemostab {

std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::LinearlyStable: return "LinearlyStable";
    case Regime::Unstable: return "Unstable";
    case Regime::Critical: return "Critical";
  }
  return "?";
}

double sensitivity_gain(const ModelParams& p, const Equilibrium& eq) {
  return p.nu * p.gamma * std::pow(eq.u_star, p.m + p.gamma - 1.0) /
         std::pow(1.0 + eq.v_star, p.beta);
}

double sigma_n(const ModelParams& p, const Equilibrium& eq, double lambda) {
  return -lambda + p.chi0 * sensitivity_gain(p, eq) * lambda / (p.mu + lambda) - p.a * p.alpha;
}

double chi_star_lower_bound(const ModelParams& p, const Equilibrium& eq) {
  const double s = std::sqrt(p.a * p.alpha) + std::sqrt(p.mu);
  return s * s / sensitivity_gain(p, eq);
}

CriticalSensitivity critical_sensitivity(const ModelParams& p, const Equilibrium& eq,
                                         const SpectrumTable& spectrum) {
  if (spectrum.size() < 2)
    throw Error(ErrorKind::SpectrumTooShort, "need at least one nonzero eigenvalue");
  const double aa = p.a * p.alpha;
  // The bracket (λ + aα)(μ + λ)/λ = λ + aα + μ + aαμ/λ increases for λ > √(aαμ).
  const double turning = std::sqrt(aa * p.mu);
  if (spectrum.eigenvalues.back() < turning)
    throw Error(ErrorKind::SpectrumTooShort,
                "spectrum ends at " + std::to_string(spectrum.eigenvalues.back()) +
                    " below the turning point " + std::to_string(turning));

  const double gain = sensitivity_gain(p, eq);
  CriticalSensitivity best{std::numeric_limits<double>::infinity(), 0};
  for (std::size_t n = 1; n < spectrum.size(); ++n) {
    const double lam = spectrum.eigenvalues[n];
    const double value = (lam + aa) * (p.mu + lam) / lam / gain;
    if (value < best.chi_star) best = {value, static_cast<int>(n)};
  }
  return best;
}

StabilityReport classify_equilibrium(const ModelParams& p, const Equilibrium& eq,
                                     const SpectrumTable& spectrum) {
  StabilityReport report;
  const auto crit = critical_sensitivity(p, eq, spectrum);
  report.chi_star = crit.chi_star;
  report.argmin_mode = crit.argmin_mode;

  const double band = 1e-12 * std::max(1.0, std::abs(crit.chi_star));
  if (std::abs(p.chi0 - crit.chi_star) <= band)
    report.regime = Regime::Critical;
  else
    report.regime = p.chi0 < crit.chi_star ? Regime::LinearlyStable : Regime::Unstable;

  report.predicted_rate = std::numeric_limits<double>::infinity();
  for (std::size_t n = 0; n < spectrum.size(); ++n) {
    const double s = sigma_n(p, eq, spectrum.eigenvalues[n]);
    report.sigma_table.push_back({static_cast<int>(n), spectrum.eigenvalues[n], s});
    if (n == 0 && p.is_minimal()) continue;
    report.predicted_rate = std::min(report.predicted_rate, -s);
  }
  return report;
}

DiscreteSpectrumCheck discrete_spectrum_check(const ModelParams& p, const Equilibrium& eq,
                                              const GridDomain& grid, int n_modes) {
  const int n = static_cast<int>(grid.size());
  if (n > 2048)
    throw Error(ErrorKind::EigsolverFailure, "dense eigen-analysis limited to 2048 cells");
  const int min_cells = grid.dimension() == 1 ? grid.cells(0)
                                               : std::min(grid.cells(0), grid.cells(1));
  if (n_modes < 1 || 4 * n_modes >= min_cells)
    throw Error(ErrorKind::EigsolverFailure, "need n_modes < cells / 4");

  // Negative discrete Laplacian with mirror ghost cells.
  Eigen::MatrixXd neg_lap = Eigen::MatrixXd::Zero(n, n);
  const int nx = grid.cells(0);
  for (int j = 0; j < grid.cells(1); ++j)
    for (int i = 0; i < nx; ++i) {
      const int c = i + nx * j;
      auto couple = [&](int other, double h) {
        neg_lap(c, c) += 1.0 / (h * h);
        neg_lap(c, other) -= 1.0 / (h * h);
      };
      if (i > 0) couple(c - 1, grid.spacing(0));
      if (i < nx - 1) couple(c + 1, grid.spacing(0));
      if (grid.dimension() == 2) {
        if (j > 0) couple(c - nx, grid.spacing(1));
        if (j < grid.cells(1) - 1) couple(c + nx, grid.spacing(1));
      }
    }

  const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd resolvent =
      (p.mu * identity + neg_lap).partialPivLu().solve(identity);
  const double coupling = p.chi0 * std::pow(eq.u_star, p.m) / std::pow(1.0 + eq.v_star, p.beta) *
                          p.nu * p.gamma * std::pow(eq.u_star, p.gamma - 1.0);
  Eigen::MatrixXd op =
      -neg_lap - coupling * (p.mu * resolvent - identity) - p.a * p.alpha * identity;
  op = 0.5 * (op + op.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(op);
  if (solver.info() != Eigen::Success)
    throw Error(ErrorKind::EigsolverFailure, "symmetric eigensolver failed");
  const Eigen::VectorXd& values = solver.eigenvalues();
  const Eigen::MatrixXd& vectors = solver.eigenvectors();

  const SpectrumTable table = neumann_eigenvalues(grid, n_modes);
  DiscreteSpectrumCheck out;
  out.max_deviation = 0.0;
  for (int k = 0; k <= n_modes; ++k) {
    const NeumannMode mode = table.modes[k];
    Eigen::VectorXd shape(n);
    for (int j = 0; j < grid.cells(1); ++j)
      for (int i = 0; i < nx; ++i) {
        double s = std::cos(mode.jx * std::numbers::pi * grid.center(0, i) / grid.length(0));
        if (grid.dimension() == 2)
          s *= std::cos(mode.jy * std::numbers::pi * grid.center(1, j) / grid.length(1));
        shape(i + nx * j) = s;
      }
    shape.normalize();
    Eigen::Index best = 0;
    (vectors.transpose() * shape).cwiseAbs().maxCoeff(&best);

    const double analytic = sigma_n(p, eq, table.eigenvalues[k]);
    const double discrete = values(best);
    const double dev = std::abs(analytic) < 1e-12
                           ? std::abs(discrete - analytic)
                           : std::abs(discrete - analytic) / std::abs(analytic);
    out.analytic.push_back(analytic);
    out.discrete.push_back(discrete);
    out.deviation.push_back(dev);
    if (k >= 1) out.max_deviation = std::max(out.max_deviation, dev);
  }
  return out;
}

}  // namespace chemostab
