#include <cmath>
#include <numbers>
#include <random>

#include <omp.h>

#include "chemostab/helmholtz.hpp"
#include "chemostab/kernels.hpp"
#include "support.hpp"

using namespace chemostab;

namespace {

Field random_field(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.2, 2.0);
  Field f(n);
  for (auto& x : f) x = unit(rng);
  return f;
}

}  // namespace

// Grids large enough to cross the OpenMP size threshold.
TEST_CASE("serial and OpenMP kernels agree bit for bit") {
  omp_set_num_threads(4);
  for (const GridDomain& grid :
       {GridDomain::interval(std::numbers::pi, 5000),
        GridDomain::rectangle(std::numbers::pi, 2.0, 96, 80)}) {
    const auto g = kernels::GridShape::of(grid);
    const Field u = random_field(grid.size(), 1);
    const Field v = random_field(grid.size(), 2);
    const kernels::SensitivityCoeffs s{1.7, 1.3, 1.5};

    kernels::FaceFlux fs, fp;
    kernels::serial::face_flux(g, s, u, v, fs);
    kernels::omp::face_flux(g, s, u, v, fp);
    CHECK(fs.x == fp.x);
    CHECK(fs.y == fp.y);

    Field ds(grid.size()), dp(grid.size());
    kernels::serial::flux_divergence(g, fs, ds);
    kernels::omp::flux_divergence(g, fs, dp);
    CHECK(ds == dp);

    Field es(grid.size()), ep(grid.size());
    kernels::serial::explicit_update({1.0, 2.0, 1.5}, 1e-3, u, ds, es);
    kernels::omp::explicit_update({1.0, 2.0, 1.5}, 1e-3, u, ds, ep);
    CHECK(es == ep);

    Field ls(grid.size()), lp(grid.size());
    kernels::serial::apply_shifted_laplacian(g, 0.7, u, ls);
    kernels::omp::apply_shifted_laplacian(g, 0.7, u, lp);
    CHECK(ls == lp);

    CHECK(kernels::serial::sum(u) == kernels::omp::sum(u));
    CHECK(kernels::serial::dot(u, v) == kernels::omp::dot(u, v));
    CHECK(kernels::serial::max_outflow_rate(g, s, u, v) == kernels::omp::max_outflow_rate(g, s, u, v));

    const ScreenedLaplacian a(grid, 1.0, kernels::Exec::Serial);
    const ScreenedLaplacian b(grid, 1.0, kernels::Exec::Parallel);
    CHECK(a.solve(u) == b.solve(u));
  }
}

TEST_CASE("flux divergence is conservative") {
  const GridDomain grid = GridDomain::rectangle(1.0, 1.5, 24, 16);
  const auto g = kernels::GridShape::of(grid);
  const Field u = random_field(grid.size(), 3);
  const Field v = random_field(grid.size(), 4);
  kernels::FaceFlux f;
  kernels::serial::face_flux(g, {2.0, 0.5, 1.0}, u, v, f);
  Field div(grid.size());
  kernels::serial::flux_divergence(g, f, div);
  double total = 0, scale = 0;
  for (double d : div) {
    total += d;
    scale += std::abs(d);
  }
  CHECK(std::abs(total) <= 1e-13 * scale);
}

TEST_CASE("no chemotactic flux without a gradient or a sensitivity") {
  const GridDomain grid = GridDomain::interval(std::numbers::pi, 32);
  const auto g = kernels::GridShape::of(grid);
  const Field u = random_field(grid.size(), 5);
  kernels::FaceFlux f;
  kernels::serial::face_flux(g, {3.0, 1.0, 1.0}, u, Field(grid.size(), 0.7), f);
  for (double x : f.x) CHECK(x == 0.0);
  kernels::serial::face_flux(g, {0.0, 1.0, 1.0}, u, random_field(grid.size(), 6), f);
  for (double x : f.x) CHECK(x == 0.0);
}
