#include "chemostab/rectangle.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "chemostab/error.hpp"

namespace chemostab {

Normalization normalize(const ModelParams& params, const Equilibrium& eq,
                        std::optional<M0Value> m0) {
  if (params.is_minimal() || !(params.a > 0.0))
    throw Error(ErrorKind::MinimalModelUnsupported, "the envelope system needs a, b > 0");
  const double bv = params.beta * eq.v_star;
  if (bv > 0.0 && !m0)
    throw Error(ErrorKind::HypothesisNotMet, "envelope with beta > 0 needs M0");
  Normalization n{};
  n.rp.kappa0 = params.chi0 * params.nu * std::pow(eq.u_star, params.m + params.gamma - 1.0) /
                params.a;
  const double m0v = m0 ? m0->value : 0.0;
  n.rp.quad_coef = bv * m0v * m0v;
  n.rp.alpha = params.alpha;
  n.rp.gamma = params.gamma;
  n.rp.m = params.m;
  n.rp.contraction = n.rp.kappa0 < 1.0 / (2.0 + n.rp.quad_coef);
  if (m0) n.rp.m0_provenance = m0->provenance;
  n.time_scale = params.a;
  n.u_star = eq.u_star;
  n.v_star = eq.v_star;
  return n;
}

RectangleParams reduce_for_signal_floor(const RectangleParams& rp, double beta, double v_star,
                                        double m0, double v_lb) {
  RectangleParams out = rp;
  out.kappa0 = rp.kappa0 * std::pow(1.0 + v_lb, -beta);
  out.quad_coef = beta * v_star * m0 * m0 / (1.0 + v_lb);
  out.contraction = out.kappa0 < 1.0 / (2.0 + out.quad_coef);
  return out;
}

std::pair<double, double> rectangle_rhs(const RectangleState& s, const RectangleParams& rp) {
  const double ug = std::pow(s.ubar, rp.gamma);
  const double lg = std::pow(s.ulow, rp.gamma);
  const double gap = ug - lg;
  const double drive_up = rp.kappa0 * std::pow(s.ubar, rp.m) * gap;
  const double dup = drive_up + rp.quad_coef * drive_up * gap +
                     s.ubar * (1.0 - std::pow(s.ubar, rp.alpha));
  const double dlow = -rp.kappa0 * std::pow(s.ulow, rp.m) * gap +
                      s.ulow * (1.0 - std::pow(s.ulow, rp.alpha));
  return {dup, dlow};
}

RectangleState envelope_start(std::span<const double> u, double u_star) {
  const auto [lo, hi] = std::minmax_element(u.begin(), u.end());
  return RectangleState{0.0, std::max(1.0, *hi / u_star), std::min(1.0, *lo / u_star)};
}

std::vector<RectangleState> integrate_rectangle(const RectangleState& init,
                                                const RectangleParams& rp, double t_end,
                                                double dt) {
  constexpr double tol = 1e-10;
  if (!(dt > 0.0) || !(t_end >= 0.0))
    throw Error(ErrorKind::ConfigError, "envelope integration needs dt > 0 and t_end >= 0");
  if (!(init.ulow > 0.0) || init.ulow > 1.0 + tol || init.ubar < 1.0 - tol)
    throw Error(ErrorKind::OrderViolation, "initial envelope must satisfy 0 < ulow <= 1 <= ubar");

  const auto steps = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9));
  std::vector<RectangleState> out;
  out.reserve(steps + 1);
  out.push_back(init);
  RectangleState s = init;
  for (std::size_t k = 0; k < steps; ++k) {
    const double h = std::min(dt, t_end - s.t);
    auto at = [&](double du, double dl, double c) {
      return RectangleState{s.t, s.ubar + c * du, s.ulow + c * dl};
    };
    const auto k1 = rectangle_rhs(s, rp);
    const auto k2 = rectangle_rhs(at(k1.first, k1.second, 0.5 * h), rp);
    const auto k3 = rectangle_rhs(at(k2.first, k2.second, 0.5 * h), rp);
    const auto k4 = rectangle_rhs(at(k3.first, k3.second, h), rp);
    s.ubar += h / 6.0 * (k1.first + 2.0 * k2.first + 2.0 * k3.first + k4.first);
    s.ulow += h / 6.0 * (k1.second + 2.0 * k2.second + 2.0 * k3.second + k4.second);
    s.t = k + 1 == steps ? t_end : s.t + h;
    if (!std::isfinite(s.ubar) || !std::isfinite(s.ulow) || s.ulow > 1.0 + tol ||
        s.ubar < 1.0 - tol || s.ulow > s.ubar + tol || !(s.ulow > 0.0))
      throw Error(ErrorKind::OrderViolation,
                  fmt::format("envelope ordering broken at tau = {} (ubar = {}, ulow = {}); "
                              "reduce dt",
                              s.t, s.ubar, s.ulow));
    out.push_back(s);
  }
  return out;
}

SandwichReport verify_sandwich(const Trajectory& pde, const std::vector<RectangleState>& rect,
                               double u_star, double time_scale, double slack, double t_offset) {
  if (rect.empty()) throw Error(ErrorKind::TimeGridMismatch, "empty envelope trajectory");
  SandwichReport report;
  const double tau_end = rect.back().t;
  for (std::size_t k = 0; k < pde.samples.size(); ++k) {
    const auto& s = pde.samples[k];
    if (s.t < t_offset) continue;
    const double tau = time_scale * (s.t - t_offset);
    if (tau > tau_end * (1.0 + 1e-12) + 1e-12)
      throw Error(ErrorKind::TimeGridMismatch,
                  fmt::format("PDE sample at tau = {} lies beyond the envelope end {}", tau,
                              tau_end));
    auto hi = std::lower_bound(rect.begin(), rect.end(), tau,
                               [](const RectangleState& r, double x) { return r.t < x; });
    double ubar, ulow;
    if (hi == rect.end()) {
      ubar = rect.back().ubar;
      ulow = rect.back().ulow;
    } else if (hi == rect.begin() || hi->t == tau) {
      ubar = hi->ubar;
      ulow = hi->ulow;
    } else {
      const auto lo = hi - 1;
      const double w = (tau - lo->t) / (hi->t - lo->t);
      ubar = lo->ubar + w * (hi->ubar - lo->ubar);
      ulow = lo->ulow + w * (hi->ulow - lo->ulow);
    }
    ++report.samples;
    const double lower_excess = ulow - slack - s.u_min / u_star;
    const double upper_excess = s.u_max / u_star - ubar - slack;
    report.worst_lower_excess = std::max(report.worst_lower_excess, lower_excess);
    report.worst_upper_excess = std::max(report.worst_upper_excess, upper_excess);
    if (lower_excess > 0.0 || upper_excess > 0.0) {
      if (!report.first_violation) {
        report.first_violation = k;
        report.first_violation_t = s.t;
      }
      ++report.violations;
    }
  }
  return report;
}

}  // namespace chemostab
