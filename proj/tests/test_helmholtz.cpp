#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "chemostab/helmholtz.hpp"
#include "support.hpp"

using namespace chemostab;

namespace {

double max_error_cos(int cells) {
  const GridDomain grid = GridDomain::interval(std::numbers::pi, cells);
  const HelmholtzOperator op(grid, 1.0);
  Field rhs(grid.size());
  for (int i = 0; i < cells; ++i) rhs[i] = 2.0 * std::cos(grid.center(0, i));
  const Field v = solve_helmholtz(op, rhs);
  double err = 0;
  for (int i = 0; i < cells; ++i) err = std::max(err, std::abs(v[i] - std::cos(grid.center(0, i))));
  return err;
}

}  // namespace

TEST_CASE("constant right-hand side gives a constant solution") {
  for (const GridDomain& grid : {GridDomain::interval(2.0, 64), GridDomain::rectangle(1.0, 2.0, 16, 24)}) {
    const HelmholtzOperator op(grid, 2.5);
    const Field v = solve_helmholtz(op, Field(grid.size(), 2.5 * 0.8));
    for (double x : v) CHECK(x == doctest::Approx(0.8).epsilon(1e-10));
  }
}

TEST_CASE("manufactured cosine converges at second order") {
  const double e128 = max_error_cos(128);
  const double e256 = max_error_cos(256);
  CHECK(e256 < 1e-4);
  CHECK(e128 / e256 == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("2D manufactured solution") {
  const double pi = std::numbers::pi;
  const GridDomain grid = GridDomain::rectangle(pi, pi, 64, 64);
  const HelmholtzOperator op(grid, 1.0);
  Field rhs(grid.size()), exact(grid.size());
  for (int j = 0; j < 64; ++j)
    for (int i = 0; i < 64; ++i) {
      const double w = std::cos(grid.center(0, i)) * std::cos(2 * grid.center(1, j));
      exact[i + 64 * j] = w;
      rhs[i + 64 * j] = 6.0 * w;  // (1 + 1 + 4) w
    }
  const Field v = solve_helmholtz(op, rhs);
  double err = 0;
  for (std::size_t k = 0; k < v.size(); ++k) err = std::max(err, std::abs(v[k] - exact[k]));
  CHECK(err < 2e-3);
}

TEST_CASE("comparison principle and chemical field bounds") {
  const GridDomain grid = GridDomain::interval(std::numbers::pi, 128);
  const HelmholtzOperator op(grid, 1.0);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    Field f(grid.size()), g(grid.size());
    for (std::size_t k = 0; k < f.size(); ++k) {
      f[k] = unit(rng);
      g[k] = f[k] + unit(rng);
    }
    const Field vf = solve_helmholtz(op, f);
    const Field vg = solve_helmholtz(op, g);
    CHECK(*std::min_element(vf.begin(), vf.end()) >= 0.0);
    for (std::size_t k = 0; k < f.size(); ++k) CHECK(vf[k] <= vg[k]);
  }

  ModelParams p;
  p.nu = 2;
  p.gamma = 1.5;
  Field u(grid.size());
  for (std::size_t k = 0; k < u.size(); ++k) u[k] = 0.5 + unit(rng);
  const Field v = chemical_field(op, p, u);
  const auto [umin, umax] = std::minmax_element(u.begin(), u.end());
  const auto [vmin, vmax] = std::minmax_element(v.begin(), v.end());
  CHECK(*vmin >= 2.0 * std::pow(*umin, 1.5) * (1 - 1e-12));
  CHECK(*vmax <= 2.0 * std::pow(*umax, 1.5) * (1 + 1e-12));

  u[3] = -0.1;
  CHECK_ERROR(chemical_field(op, p, u), ErrorKind::NonPositiveDensity);
}

TEST_CASE("non-finite input is rejected") {
  const GridDomain grid = GridDomain::interval(1.0, 16);
  const HelmholtzOperator op(grid, 1.0);
  Field rhs(grid.size(), 1.0);
  rhs[2] = std::nan("");
  CHECK_ERROR(solve_helmholtz(op, rhs), ErrorKind::NonFiniteInput);
}
