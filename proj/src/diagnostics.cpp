#include "chemostab/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "chemostab/error.hpp"
#include "chemostab/kernels.hpp"
#include "chemostab/thresholds.hpp"

namespace chemostab {

namespace {

void require_grid(std::span<const double> x, const GridDomain& grid) {
  if (x.size() != grid.size()) throw Error(ErrorKind::NonFiniteInput, "field does not match grid");
}

// Blocked sum in index order, matching kernels::sum.
template <class Term>
double ordered_sum(std::size_t n, Term term) {
  double total = 0.0;
  for (std::size_t lo = 0; lo < n; lo += kernels::kReductionBlock) {
    const std::size_t hi = std::min(n, lo + kernels::kReductionBlock);
    double acc = 0.0;
    for (std::size_t k = lo; k < hi; ++k) acc += term(k);
    total += acc;
  }
  return total;
}

}  // namespace

double lyapunov_density(double s, double u_star, double m) {
  if (!(s > 0.0)) throw Error(ErrorKind::NonPositiveDensity, "Lyapunov density needs s > 0");
  const double d = (s - u_star) / u_star;
  if (m == 1.0) return u_star * (d - std::log1p(d));
  const double k = 2.0 - 2.0 * m;
  return u_star * (d + std::expm1(k * std::log1p(d)) / (2.0 * m - 2.0));
}

double lyapunov_F(std::span<const double> u, double u_star, double m, const GridDomain& grid) {
  require_grid(u, grid);
  return ordered_sum(u.size(), [&](std::size_t k) { return lyapunov_density(u[k], u_star, m); }) *
         grid.cell_volume();
}

double minimal_entropy(std::span<const double> u, double u_star, const GridDomain& grid) {
  return lyapunov_F(u, u_star, 1.0, grid);
}

double dissipation_D(std::span<const double> u, double u_star, double alpha,
                     const GridDomain& grid) {
  require_grid(u, grid);
  const double ua = std::pow(u_star, alpha);
  return ordered_sum(u.size(),
                     [&](std::size_t k) {
                       const double x = std::max(u[k], 0.0);
                       return (x - u_star) * (std::pow(x, alpha) - ua);
                     }) *
         grid.cell_volume();
}

double v_energy(std::span<const double> v, double v_star, double mu, const GridDomain& grid) {
  require_grid(v, grid);
  const int nx = grid.cells(0);
  const int ny = grid.cells(1);
  const double bulk =
      ordered_sum(v.size(), [&](std::size_t k) { return mu * (v[k] - v_star) * (v[k] - v_star); });
  // Face differences; w − v* and v share gradients. Each face carries a volume of one cell.
  const double hx = grid.spacing(0);
  double grad = ordered_sum(static_cast<std::size_t>(ny) * (nx - 1), [&](std::size_t f) {
    const std::size_t j = f / (nx - 1);
    const std::size_t i = f % (nx - 1);
    const double d = (v[i + 1 + nx * j] - v[i + nx * j]) / hx;
    return d * d;
  });
  if (grid.dimension() == 2) {
    const double hy = grid.spacing(1);
    grad += ordered_sum(static_cast<std::size_t>(nx) * (ny - 1), [&](std::size_t f) {
      const double d = (v[f + nx] - v[f]) / hy;
      return d * d;
    });
  }
  return (bulk + grad) * grid.cell_volume();
}

DecayFit fit_decay_rate(std::span<const double> times, std::span<const double> values,
                        double floor) {
  if (times.size() != values.size())
    throw Error(ErrorKind::WindowEmpty, "times and values differ in length");
  if (values.empty() || !(values[0] > 0.0))
    throw Error(ErrorKind::WindowEmpty, "series must start positive");
  const double hi = 0.1 * values[0];
  const double lo = 10.0 * floor;
  double st = 0, sy = 0, stt = 0, sty = 0;
  std::size_t n = 0;
  std::vector<std::pair<double, double>> pts;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (!(values[k] >= lo && values[k] <= hi)) continue;
    pts.emplace_back(times[k], std::log(values[k]));
  }
  n = pts.size();
  if (n < 3)
    throw Error(ErrorKind::WindowEmpty,
                "fewer than three samples between 10*floor and 0.1*initial value");
  for (const auto& [t, y] : pts) {
    st += t;
    sy += y;
  }
  const double tm = st / n;
  const double ym = sy / n;
  for (const auto& [t, y] : pts) {
    stt += (t - tm) * (t - tm);
    sty += (t - tm) * (y - ym);
  }
  if (!(stt > 0.0)) throw Error(ErrorKind::WindowEmpty, "fit window spans a single time");
  const double slope = sty / stt;
  const double intercept = ym - slope * tm;
  double ss_res = 0, ss_tot = 0;
  for (const auto& [t, y] : pts) {
    const double r = y - (intercept + slope * t);
    ss_res += r * r;
    ss_tot += (y - ym) * (y - ym);
  }
  return DecayFit{-slope, std::exp(intercept), ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0, n};
}

InequalityFuzzReport check_power_diff_inequality(std::size_t trials, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double log_lo = std::log(1e-3);
  const double log_hi = std::log(1e3);
  InequalityFuzzReport report;
  while (report.trials < trials) {
    const double alpha = 5.0 * unit(rng);
    if (!(alpha > 0.0)) continue;
    const double gamma = (alpha + 1.0) / 2.0 * unit(rng);
    if (!(gamma > 0.0)) continue;
    const double u_star = std::exp(log_lo + (log_hi - log_lo) * unit(rng));
    const double u = std::exp(log_lo + (log_hi - log_lo) * unit(rng));
    if (u == u_star) continue;
    ++report.trials;

    // Differences through t = ln(u/u*) to avoid cancellation near u = u*.
    const double t = std::log(u) - std::log(u_star);
    const double du = u_star * std::expm1(t);
    const double dg = std::pow(u_star, gamma) * std::expm1(gamma * t);
    const double da = std::pow(u_star, alpha) * std::expm1(alpha * t);
    const double lhs = dg * dg;
    const double rhs = power_diff_constant(alpha, gamma) *
                       std::pow(u_star, 2.0 * gamma - alpha - 1.0) * du * da;
    if (!(rhs > 0.0)) continue;
    const double ratio = lhs / rhs;
    report.worst_ratio = std::max(report.worst_ratio, ratio);
    if (lhs > rhs * (1.0 + 1e-12)) ++report.violations;
  }
  return report;
}

PersistenceReport persistence_metrics(const Trajectory& traj, const ModelParams& p,
                                      const Equilibrium& eq, double rel_tol) {
  (void)eq;
  if (traj.samples.empty()) throw Error(ErrorKind::WindowEmpty, "trajectory has no samples");
  const double t0 = traj.samples.front().t;
  const double t1 = traj.samples.back().t;
  const double tail_start = t0 + 0.75 * (t1 - t0);

  PersistenceReport r{};
  r.tail_inf_u = std::numeric_limits<double>::infinity();
  r.tail_inf_v = std::numeric_limits<double>::infinity();
  for (const auto& s : traj.samples) {
    if (s.t < tail_start) continue;
    r.tail_inf_u = std::min(r.tail_inf_u, s.u_min);
    r.tail_inf_v = std::min(r.tail_inf_v, s.v_min);
  }
  r.generic_v_bound = p.nu / p.mu * std::pow(r.tail_inf_u, p.gamma);

  const bool logistic = p.a > 0.0 && p.b > 0.0;
  if (logistic && p.chi0 == 0.0) {
    r.u_bound = std::pow(p.a / p.b, 1.0 / p.alpha);
    r.bound_source = "logistic comparison (chi0 = 0)";
  } else if (logistic && p.chi0 > 0.0 && p.m == 1.0 && p.beta >= 1.0 &&
             p.chi0 < p.a / (p.mu * theta(p.beta - 1.0))) {
    r.u_bound = std::pow((p.a - p.chi0 * p.mu * theta(p.beta - 1.0)) / p.b, 1.0 / p.alpha);
    r.bound_source = "m = 1, beta >= 1, chi0 < a/(mu*Theta_{beta-1})";
  } else if (logistic && p.chi0 > 0.0 && p.m > 1.0 && p.beta >= 1.0) {
    const double base = p.a / (p.b + p.chi0 * p.mu * theta(p.beta - 1.0));
    r.u_bound = std::min(1.0, std::pow(base, std::max(1.0 / (p.m - 1.0), 1.0 / p.alpha)));
    r.bound_source = "m > 1, beta >= 1";
  } else {
    r.bound_source = "none (explicit bound inapplicable)";
  }
  r.hypothesis_met = r.u_bound.has_value();
  if (r.u_bound) r.v_bound = p.nu / p.mu * std::pow(*r.u_bound, p.gamma);

  r.u_ok = !r.u_bound || r.tail_inf_u >= *r.u_bound * (1.0 - rel_tol);
  const double v_target = r.v_bound ? std::max(*r.v_bound, r.generic_v_bound) : r.generic_v_bound;
  r.v_ok = r.tail_inf_v >= v_target * (1.0 - rel_tol);
  return r;
}

}  // namespace chemostab
