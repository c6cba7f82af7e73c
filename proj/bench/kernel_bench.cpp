// Serial reference vs OpenMP kernels on a 2D grid. Prints one line per kernel
// with the median wall time of each and whether the outputs agree bit for bit.
//
//   kernel_bench [cells-per-side] [repeats]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <vector>

#include <omp.h>

#include "chemostab/helmholtz.hpp"
#include "chemostab/integrator.hpp"
#include "chemostab/kernels.hpp"

using namespace chemostab;
using kernels::Exec;

namespace {

double median_ms(int repeats, const std::function<void()>& body) {
  std::vector<double> times;
  for (int r = 0; r < repeats; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    body();
    const auto t1 = std::chrono::steady_clock::now();
    times.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  std::nth_element(times.begin(), times.begin() + times.size() / 2, times.end());
  return times[times.size() / 2];
}

void report(const char* name, double serial, double parallel, bool same) {
  std::printf("%-22s serial %9.3f ms  omp %9.3f ms  speedup %5.2fx  %s\n", name, serial, parallel,
              serial / parallel, same ? "identical" : "DIFFERENT");
}

}  // namespace

int main(int argc, char** argv) {
  const int n = argc > 1 ? std::atoi(argv[1]) : 512;
  const int repeats = argc > 2 ? std::atoi(argv[2]) : 9;
  if (n < 8 || repeats < 1) {
    std::fprintf(stderr, "usage: kernel_bench [cells-per-side >= 8] [repeats >= 1]\n");
    return 2;
  }
  std::printf("grid %dx%d, %d repeats, %d OpenMP threads\n", n, n, repeats, omp_get_max_threads());

  const GridDomain grid = GridDomain::rectangle(M_PI, M_PI, n, n);
  const auto shape = kernels::GridShape::of(grid);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(0.5, 1.5);
  Field u(grid.size()), v(grid.size());
  for (auto& x : u) x = unit(rng);
  for (auto& x : v) x = unit(rng);
  const kernels::SensitivityCoeffs sens{2.0, 1.0, 1.0};
  const kernels::ReactionCoeffs react{1.0, 1.0, 1.0};

  {
    kernels::FaceFlux fs, fp;
    const double ts = median_ms(repeats, [&] { kernels::serial::face_flux(shape, sens, u, v, fs); });
    const double tp = median_ms(repeats, [&] { kernels::omp::face_flux(shape, sens, u, v, fp); });
    report("face_flux", ts, tp, fs.x == fp.x && fs.y == fp.y);

    Field ds(grid.size()), dp(grid.size());
    const double ts2 = median_ms(repeats, [&] { kernels::serial::flux_divergence(shape, fs, ds); });
    const double tp2 = median_ms(repeats, [&] { kernels::omp::flux_divergence(shape, fs, dp); });
    report("flux_divergence", ts2, tp2, ds == dp);

    Field es(grid.size()), ep(grid.size());
    const double ts3 =
        median_ms(repeats, [&] { kernels::serial::explicit_update(react, 1e-3, u, ds, es); });
    const double tp3 =
        median_ms(repeats, [&] { kernels::omp::explicit_update(react, 1e-3, u, ds, ep); });
    report("explicit_update", ts3, tp3, es == ep);
  }
  {
    Field os(grid.size()), op(grid.size());
    const double ts =
        median_ms(repeats, [&] { kernels::serial::apply_shifted_laplacian(shape, 1.0, u, os); });
    const double tp =
        median_ms(repeats, [&] { kernels::omp::apply_shifted_laplacian(shape, 1.0, u, op); });
    report("shifted_laplacian", ts, tp, os == op);
  }
  {
    double ss = 0, sp = 0;
    const double ts = median_ms(repeats, [&] { ss = kernels::serial::dot(u, v); });
    const double tp = median_ms(repeats, [&] { sp = kernels::omp::dot(u, v); });
    report("dot", ts, tp, ss == sp);
  }
  {
    const ScreenedLaplacian ls(grid, 1.0, Exec::Serial), lp(grid, 1.0, Exec::Parallel);
    Field xs, xp;
    const double ts = median_ms(repeats, [&] { xs = ls.solve(u); });
    const double tp = median_ms(repeats, [&] { xp = lp.solve(u); });
    report("helmholtz_cg", ts, tp, xs == xp);
  }
  {
    ModelParams p;
    p.chi0 = 2.0;
    p.beta = 1.0;
    const HelmholtzOperator h(grid, p.mu, Exec::Serial);
    FieldState s0{0.0, u, chemical_field(h, p, u)};
    Integrator is(p, grid, Exec::Serial), ip(p, grid, Exec::Parallel);
    FieldState rs, rp;
    const double ts = median_ms(repeats, [&] { rs = is.step(s0, 1e-3); });
    const double tp = median_ms(repeats, [&] { rp = ip.step(s0, 1e-3); });
    report("full_step", ts, tp, rs.u == rp.u && rs.v == rp.v);
  }
  return 0;
}
