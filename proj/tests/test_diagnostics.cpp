#include <cmath>
#include <numbers>
#include <random>

#include "chemostab/diagnostics.hpp"
#include "chemostab/integrator.hpp"
#include "chemostab/thresholds.hpp"
#include "support.hpp"

using namespace chemostab;

namespace {

const GridDomain kUnit = GridDomain::interval(1.0, 16);

}  // namespace

TEST_CASE("Lyapunov functional") {
  CHECK(lyapunov_F(Field(16, 1.5), 1.5, 1.0, kUnit) == 0.0);
  CHECK(lyapunov_F(Field(16, 1.5), 1.5, 2.5, kUnit) == 0.0);
  // h_1(s) = s − u* − u* ln(s/u*) at s = 2u*.
  CHECK(lyapunov_F(Field(16, 2.0), 1.0, 1.0, kUnit) == doctest::Approx(1 - std::log(2.0)).epsilon(1e-14));
  // Other m against Simpson quadrature of ∫_{u*}^s (1 − (u*/τ)^{2m−1}) dτ.
  for (double m : {1.5, 2.0, 3.7})
    for (double s : {0.3, 3.0}) {
      const int n = 20000;
      const double u_star = 1.2, h = (s - u_star) / n;
      double acc = 0;
      for (int k = 0; k <= n; ++k) {
        const double tau = u_star + k * h;
        const double w = (k == 0 || k == n) ? 1 : (k % 2 ? 4 : 2);
        acc += w * (1 - std::pow(u_star / tau, 2 * m - 1));
      }
      CHECK(lyapunov_F(Field(16, s), u_star, m, kUnit) == doctest::Approx(acc * h / 3).epsilon(1e-10));
    }

  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> unit(0.1, 3.0);
  for (int t = 0; t < 50; ++t) {
    Field u(16);
    for (auto& x : u) x = unit(rng);
    CHECK(lyapunov_F(u, 1.0, 1.0 + t * 0.1, kUnit) > 0);
  }
  CHECK_ERROR(lyapunov_density(0.0, 1.0, 1.0), ErrorKind::NonPositiveDensity);
}

TEST_CASE("dissipation") {
  CHECK(dissipation_D(Field(16, 2.0), 2.0, 1.5, kUnit) == 0.0);
  Field u(16);
  for (int k = 0; k < 16; ++k) u[k] = k % 2 ? 1.3 : 0.7;
  CHECK(dissipation_D(u, 1.0, 1.0, kUnit) == doctest::Approx(0.09).epsilon(1e-13));
}

TEST_CASE("decay fit") {
  std::vector<double> t, y, noisy;
  std::mt19937_64 rng(4);
  std::normal_distribution<double> noise(0.0, 0.01);
  for (int k = 0; k <= 100; ++k) {
    t.push_back(0.5 * k);
    y.push_back(3 * std::exp(-0.5 * t.back()));
    noisy.push_back(y.back() * (1 + noise(rng)));
  }
  // The window starts at 0.1·y0, so the intercept refers to the full exponential.
  const DecayFit exact = fit_decay_rate(t, y);
  CHECK(exact.rate == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(exact.prefactor == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(std::abs(fit_decay_rate(t, noisy).rate - 0.5) <= 0.02);
  CHECK_ERROR(fit_decay_rate(t, std::vector<double>(t.size(), 1.0)), ErrorKind::WindowEmpty);
}

TEST_CASE("power difference inequality") {
  // α = 2, γ = 1, u* = 1, u = 4: (4 − 1)² ≤ C · 3 · 15.
  const double lhs = 9, rhs = power_diff_constant(2, 1) * 3 * 15;
  CHECK(rhs == 45);
  CHECK(lhs <= rhs);
  std::mt19937_64 rng(2);
  const auto r = check_power_diff_inequality(20000, rng);
  CHECK(r.trials == 20000);
  CHECK(r.violations == 0);
  CHECK(r.worst_ratio <= 1.0 + 1e-12);
}

TEST_CASE("persistence bounds") {
  ModelParams p;
  p.a = 2;
  p.b = 1;
  p.chi0 = 1;
  p.beta = 1;
  const GridDomain grid = GridDomain::interval(std::numbers::pi, 64);
  StepConfig cfg;
  cfg.t_end = 20;
  cfg.output_stride = 10;
  const Trajectory t = run(p, grid, init_state(grid, p, CosineInit{0.5, 0.5}), cfg);
  const auto r = persistence_metrics(t, p, t.eq);
  REQUIRE(r.u_bound);
  CHECK(*r.u_bound == doctest::Approx((2.0 - 1.0 * theta(0.0)) / 1.0));
  CHECK(*r.v_bound == doctest::Approx(*r.u_bound));
  CHECK(r.u_ok);
  CHECK(r.v_ok);

  ModelParams free = p;
  free.chi0 = 0;
  const auto r0 = persistence_metrics(t, free, t.eq);
  CHECK(*r0.u_bound == doctest::Approx(2.0));
}

TEST_CASE("v energy") {
  const GridDomain grid = GridDomain::rectangle(1.0, 1.0, 16, 16);
  CHECK(v_energy(Field(grid.size(), 0.4), 0.4, 2.0, grid) == 0.0);
  Field v(grid.size(), 1.0);
  v[0] = 1.5;
  CHECK(v_energy(v, 1.0, 2.0, grid) > 0.0);
}
